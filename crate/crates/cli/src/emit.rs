//! Deterministic artifact emission: JSON and CSV with floats printed at 17
//! significant digits, a fixed-style SVG scatter of the spectrum, and the
//! dense binary matrix layout.

use std::io::Write;

use num_complex::Complex64;
use resonance_core::cmatrix::CMatrix;
use resonance_core::spectral::{MatchReport, Provenance, SpectrumMultiset};

/// 17 significant digits, scientific; byte-stable across runs.
pub fn f64_repr(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn schema_comment() -> &'static str {
    "# resonances-csv schema=1"
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn entry_json(value: Complex64, mult: usize, provenance: Provenance) -> String {
    let block = match provenance {
        Provenance::Block(k) => k.to_string(),
        Provenance::Theory => "\"theory\"".to_string(),
    };
    format!(
        "{{\"re\":{},\"im\":{},\"mult\":{},\"block\":{}}}",
        f64_repr(value.re),
        f64_repr(value.im),
        mult,
        block
    )
}

fn value_json(value: Complex64) -> String {
    format!("{{\"re\":{},\"im\":{}}}", f64_repr(value.re), f64_repr(value.im))
}

pub struct MapDescription {
    pub kind: String,
    pub lambda: Complex64,
    pub mu: Option<Complex64>,
    pub bigk: Option<u32>,
}

pub struct SpaceDescription {
    pub a: f64,
    pub phi: f64,
    pub weights: String,
}

/// The spectrum report JSON:
/// `{schema, map, space, computed, theoretical, match}` with eigenvalues as
/// `{re, im, mult, block}`.
pub fn spectrum_json(
    map: &MapDescription,
    space: &SpaceDescription,
    computed: &SpectrumMultiset,
    theoretical: &SpectrumMultiset,
    report: &MatchReport,
) -> String {
    let mut out = String::new();
    out.push_str("{\"schema\":1,");
    out.push_str(&format!("\"map\":{{\"kind\":\"{}\",", json_escape(&map.kind)));
    out.push_str(&format!("\"lambda\":{}", value_json(map.lambda)));
    if let Some(mu) = map.mu {
        out.push_str(&format!(",\"mu\":{}", value_json(mu)));
    }
    if let Some(k) = map.bigk {
        out.push_str(&format!(",\"k\":{k}"));
    }
    out.push_str("},");
    out.push_str(&format!(
        "\"space\":{{\"a\":{},\"phi\":{},\"weights\":\"{}\"}},",
        f64_repr(space.a),
        f64_repr(space.phi),
        json_escape(&space.weights)
    ));
    for (name, set) in [("computed", computed), ("theoretical", theoretical)] {
        out.push_str(&format!("\"{name}\":["));
        let items: Vec<String> = set
            .entries
            .iter()
            .map(|e| entry_json(e.value, e.multiplicity, e.provenance))
            .collect();
        out.push_str(&items.join(","));
        out.push_str("],");
    }
    out.push_str(&format!(
        "\"match\":{{\"tolerance\":{},\"max_distance\":{},\"matched\":{},\"missing\":[{}],\"spurious\":[{}]}}",
        f64_repr(report.tolerance),
        f64_repr(report.max_distance),
        report.matched.len(),
        report
            .missing_theoretical
            .iter()
            .map(|&v| value_json(v))
            .collect::<Vec<_>>()
            .join(","),
        report
            .spurious_computed
            .iter()
            .map(|&v| value_json(v))
            .collect::<Vec<_>>()
            .join(",")
    ));
    out.push('}');
    out
}

/// CSV of computed and theoretical eigenvalues.
pub fn spectrum_csv(computed: &SpectrumMultiset, theoretical: &SpectrumMultiset) -> String {
    let mut out = String::new();
    out.push_str(schema_comment());
    out.push('\n');
    out.push_str("kind,re,im,modulus,multiplicity,block\n");
    for (kind, set) in [("computed", computed), ("theoretical", theoretical)] {
        for e in &set.entries {
            let block = match e.provenance {
                Provenance::Block(k) => k.to_string(),
                Provenance::Theory => "theory".to_string(),
            };
            out.push_str(&format!(
                "{kind},{},{},{},{},{}\n",
                f64_repr(e.value.re),
                f64_repr(e.value.im),
                f64_repr(e.value.norm()),
                e.multiplicity,
                block
            ));
        }
    }
    out
}

fn svg_coord(v: f64) -> String {
    format!("{v:.6}")
}

/// Standalone SVG scatter: the unit circle, computed eigenvalues as filled
/// dots, theoretical ones as open circles, 1:1 viewport over the closed
/// unit disk plus a 10% margin. Styling is fixed so the output is
/// byte-stable.
pub fn spectrum_svg(
    map: &MapDescription,
    computed: &SpectrumMultiset,
    theoretical: &SpectrumMultiset,
) -> String {
    let mut out = String::new();
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" \
         viewBox=\"-1.1 -1.1 2.2 2.2\">\n",
    );
    out.push_str("<rect x=\"-1.1\" y=\"-1.1\" width=\"2.2\" height=\"2.2\" fill=\"white\"/>\n");
    out.push_str(
        "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#888888\" \
         stroke-width=\"0.004\"/>\n",
    );
    out.push_str(
        "<line x1=\"-1.1\" y1=\"0\" x2=\"1.1\" y2=\"0\" stroke=\"#cccccc\" \
         stroke-width=\"0.003\"/>\n",
    );
    out.push_str(
        "<line x1=\"0\" y1=\"-1.1\" x2=\"0\" y2=\"1.1\" stroke=\"#cccccc\" \
         stroke-width=\"0.003\"/>\n",
    );
    for e in &theoretical.entries {
        out.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"0.024\" fill=\"none\" stroke=\"#d62728\" \
             stroke-width=\"0.006\"/>\n",
            svg_coord(e.value.re),
            svg_coord(-e.value.im)
        ));
    }
    for e in &computed.entries {
        out.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"0.012\" fill=\"#1f77b4\"/>\n",
            svg_coord(e.value.re),
            svg_coord(-e.value.im)
        ));
    }
    let mut legend = format!(
        "map {}: lambda = {} + {}i",
        map.kind,
        svg_coord(map.lambda.re),
        svg_coord(map.lambda.im)
    );
    if let Some(mu) = map.mu {
        legend.push_str(&format!(", mu = {} + {}i", svg_coord(mu.re), svg_coord(mu.im)));
    }
    if let Some(k) = map.bigk {
        legend.push_str(&format!(", K = {k}"));
    }
    out.push_str(&format!(
        "<text x=\"-1.06\" y=\"-1.03\" font-family=\"monospace\" font-size=\"0.055\" \
         fill=\"#333333\">{legend}</text>\n",
    ));
    out.push_str(
        "<text x=\"-1.06\" y=\"1.07\" font-family=\"monospace\" font-size=\"0.045\" \
         fill=\"#1f77b4\">filled: computed</text>\n",
    );
    out.push_str(
        "<text x=\"0.1\" y=\"1.07\" font-family=\"monospace\" font-size=\"0.045\" \
         fill=\"#d62728\">open: theoretical</text>\n",
    );
    out.push_str("</svg>\n");
    out
}

/// Dense binary layout: 16-byte header (the dimension as little-endian u64,
/// twice), then row-major little-endian f64 re/im pairs.
pub fn write_matrix_binary<W: Write>(mut w: W, m: &CMatrix) -> std::io::Result<()> {
    let dim = m.dim() as u64;
    w.write_all(&dim.to_le_bytes())?;
    w.write_all(&dim.to_le_bytes())?;
    for v in m.data() {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_repr_is_17_significant_digits() {
        assert_eq!(f64_repr(0.5), "5.0000000000000000e-1");
        assert_eq!(f64_repr(-1.0 / 3.0), "-3.3333333333333331e-1");
        assert_eq!(f64_repr(0.0), "0.0000000000000000e0");
    }

    #[test]
    fn matrix_binary_layout() {
        let mut m = CMatrix::zeros(2);
        m[(0, 1)] = Complex64::new(1.5, -2.5);
        let mut buf = Vec::new();
        write_matrix_binary(&mut buf, &m).unwrap();
        assert_eq!(buf.len(), 16 + 4 * 16);
        assert_eq!(u64::from_le_bytes(buf[0..8].try_into().unwrap()), 2);
        assert_eq!(u64::from_le_bytes(buf[8..16].try_into().unwrap()), 2);
        let re = f64::from_le_bytes(buf[32..40].try_into().unwrap());
        let im = f64::from_le_bytes(buf[40..48].try_into().unwrap());
        assert_eq!((re, im), (1.5, -2.5));
    }
}
