//! Eigenvalue extraction: exact structured solves for operator blocks, the
//! dense eigensolver for windowed cross-validation, closed-form spectra of
//! the map families, and multiset matching with multiplicities.

pub mod dense;

use num_complex::Complex64;

use crate::blaschke::BlaschkeParam;
use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::operator::{block_matrix, BlockMatrix, MapSpec};

pub use dense::{eigenvalues as dense_eigenvalues, numerical_rank};

/// Where a spectrum entry came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// The deg₁ level of the contributing block (smallest |k| on merge).
    Block(i64),
    /// Closed-form theoretical value.
    Theory,
}

#[derive(Debug, Clone)]
pub struct SpectrumEntry {
    pub value: Complex64,
    pub multiplicity: usize,
    pub provenance: Provenance,
}

/// Eigenvalue multiset, coalesced and sorted by descending modulus then by
/// argument.
#[derive(Debug, Clone)]
pub struct SpectrumMultiset {
    pub entries: Vec<SpectrumEntry>,
    pub modulus_floor: f64,
    /// Largest possible eigenvalue modulus from blocks outside the computed
    /// range, when a closed form for the family is known. Any true
    /// eigenvalue above the floor but outside the range is below this bound.
    pub omitted_modulus_bound: Option<f64>,
}

impl SpectrumMultiset {
    /// Total count with multiplicities.
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Entries flattened by multiplicity.
    pub fn flatten(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.total_multiplicity());
        for e in &self.entries {
            out.extend(std::iter::repeat(e.value).take(e.multiplicity));
        }
        out
    }

    pub fn find(&self, value: Complex64, tol: f64) -> Option<&SpectrumEntry> {
        self.entries.iter().find(|e| (e.value - value).norm() <= tol)
    }
}

/// Merge radius for multiplicity counting: values within
/// `max(1e-10, 1e-8·|ρ|)` of a representative coalesce into one entry.
pub fn merge_radius(rho: Complex64) -> f64 {
    (1e-8 * rho.norm()).max(1e-10)
}

/// Modulus floor with a 1e-9 relative slack so that values sitting exactly
/// on the floor (the usual `|λ|^k_max` choice) are kept on both the computed
/// and theoretical sides.
fn passes_floor(modulus: f64, floor: f64) -> bool {
    modulus >= floor * (1.0 - 1e-9)
}

fn sort_key(v: Complex64, seq: usize) -> (f64, f64, u64, u64, usize) {
    // Descending modulus (negated), ascending argument, bit tiebreak,
    // insertion order last so merging is deterministic.
    (-v.norm(), v.arg(), v.re.to_bits(), v.im.to_bits(), seq)
}

fn coalesce(
    items: Vec<(Complex64, usize, Provenance)>,
    floor: f64,
    omitted: Option<f64>,
) -> SpectrumMultiset {
    let mut tagged: Vec<(Complex64, usize, Provenance, usize)> = items
        .into_iter()
        .enumerate()
        .map(|(seq, (v, m, p))| (v, m, p, seq))
        .collect();
    tagged.sort_by(|a, b| sort_key(a.0, a.3).partial_cmp(&sort_key(b.0, b.3)).unwrap());
    let mut entries: Vec<SpectrumEntry> = Vec::new();
    for (value, mult, prov, _) in tagged {
        if !passes_floor(value.norm(), floor) {
            continue;
        }
        if let Some(e) = entries
            .iter_mut()
            .find(|e| (e.value - value).norm() <= merge_radius(e.value))
        {
            e.multiplicity += mult;
            continue;
        }
        entries.push(SpectrumEntry { value, multiplicity: mult, provenance: prov });
    }
    SpectrumMultiset { entries, modulus_floor: floor, omitted_modulus_bound: omitted }
}

/// Exact eigenvalues of a matrix with at most one nonzero entry per column
/// (detected by exact pattern inspection). The support is then a functional
/// graph; only its cycles contribute nonzero eigenvalues, each cycle of
/// length `L` and weight product `W` contributing the `L`-th roots of `W`,
/// and every off-cycle node contributing an exact zero.
fn structured_eigenvalues(m: &CMatrix) -> Option<Vec<Complex64>> {
    let n = m.dim();
    let zero = Complex64::new(0.0, 0.0);
    let mut succ: Vec<Option<(usize, Complex64)>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut found = None;
        for i in 0..n {
            let v = m[(i, j)];
            if v != zero {
                if found.is_some() {
                    return None;
                }
                found = Some((i, v));
            }
        }
        succ.push(found);
    }
    let mut out = Vec::with_capacity(n);
    let mut color = vec![0u8; n]; // 0 new, 1 on path, 2 finished
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        let mut path = vec![start];
        color[start] = 1;
        loop {
            let cur = *path.last().expect("path nonempty");
            match succ[cur] {
                Some((next, _)) if color[next] == 0 => {
                    color[next] = 1;
                    path.push(next);
                }
                Some((next, _)) if color[next] == 1 => {
                    let pos = path.iter().position(|&v| v == next).expect("on path");
                    let cycle = &path[pos..];
                    let mut w = Complex64::new(1.0, 0.0);
                    for &v in cycle {
                        w *= succ[v].expect("cycle edge").1;
                    }
                    out.extend(roots(w, cycle.len()));
                    for &v in &path {
                        color[v] = 2;
                    }
                    break;
                }
                _ => {
                    for &v in &path {
                        color[v] = 2;
                    }
                    break;
                }
            }
        }
    }
    out.resize(n, zero);
    Some(out)
}

/// The `l`-th roots of `w`, principal root first.
fn roots(w: Complex64, l: usize) -> Vec<Complex64> {
    match l {
        1 => vec![w],
        2 => {
            let s = w.sqrt();
            vec![s, -s]
        }
        _ => {
            let r = w.norm().powf(1.0 / l as f64);
            let theta = w.arg() / l as f64;
            (0..l)
                .map(|j| {
                    Complex64::from_polar(
                        r,
                        theta + 2.0 * std::f64::consts::PI * j as f64 / l as f64,
                    )
                })
                .collect()
        }
    }
}

/// Eigenvalues of `Π_{D_k} C Π_{D_k}`, zeros retained, coalesced for
/// multiplicity. Structured solve when the block is a weighted functional
/// graph (always the case for the maps built here); dense QR otherwise.
pub fn block_spectrum(spec: &MapSpec, k: i64) -> Result<SpectrumMultiset> {
    let blk = block_matrix(spec, k)?;
    Ok(block_spectrum_of_matrix(&blk))
}

/// Spectrum of an assembled block; exposed for reuse by higher layers.
pub fn block_spectrum_of_matrix(blk: &BlockMatrix) -> SpectrumMultiset {
    let eigs = match structured_eigenvalues(&blk.data) {
        Some(e) => e,
        None => dense::eigenvalues(&blk.data).expect("block dimensions are small"),
    };
    let items = eigs.into_iter().map(|v| (v, 1, Provenance::Block(blk.k))).collect();
    coalesce(items, 0.0, None)
}

/// Union of block spectra over `k_min..=k_max` (skipping the empty level
/// `k = -1`), coalesced and filtered by `modulus_floor`. The
/// `omitted_modulus_bound` field records the completeness guarantee.
pub fn spectrum(
    spec: &MapSpec,
    k_min: i64,
    k_max: i64,
    modulus_floor: f64,
) -> Result<SpectrumMultiset> {
    let blocks: Result<Vec<SpectrumMultiset>> = (k_min..=k_max)
        .filter(|&k| k != -1)
        .map(|k| block_spectrum(spec, k))
        .collect();
    Ok(merge_block_spectra(blocks?, modulus_floor, omitted_level_bound(spec, k_min, k_max)))
}

/// Merge per-block spectra (as produced by [`block_spectrum`], supplied in
/// ascending-k order for deterministic provenance) into one coalesced
/// multiset. Lets callers compute blocks in parallel and fold the result.
pub fn merge_block_spectra(
    blocks: Vec<SpectrumMultiset>,
    modulus_floor: f64,
    omitted_modulus_bound: Option<f64>,
) -> SpectrumMultiset {
    let mut items = Vec::new();
    for b in blocks {
        for e in b.entries {
            items.push((e.value, e.multiplicity, e.provenance));
        }
    }
    coalesce(items, modulus_floor, omitted_modulus_bound)
}

/// Largest possible eigenvalue modulus at deg₁ level `j` for the supported
/// closed-form families.
fn level_modulus(spec: &MapSpec, j: i64) -> Option<f64> {
    match spec {
        MapSpec::B { lambda } => Some(match j {
            0 => 1.0,
            j if j > 0 => lambda.modulus().powi(j as i32),
            _ => 0.0,
        }),
        MapSpec::Bk { lambda, k } => {
            let base = lambda.modulus().powi(*k as i32);
            Some(match j {
                0 => 1.0,
                j if j > 0 => base.powi(j as i32),
                _ => 0.0,
            })
        }
        MapSpec::T { lambda } => Some(match j {
            0 => 1.0,
            -1 => 0.0,
            j => lambda.modulus().sqrt().powi(j.unsigned_abs() as i32),
        }),
        MapSpec::Tk { lambda, k } => {
            let base = lambda.modulus().powi(*k as i32).sqrt();
            Some(match j {
                0 => 1.0,
                -1 => 0.0,
                j => base.powi(j.unsigned_abs() as i32),
            })
        }
        MapSpec::Compose(_) => {
            let (l, mu) = two_t_factors(spec)?;
            let base = l.modulus().max(mu.modulus());
            Some(match j {
                0 => 1.0,
                -1 => 0.0,
                j => base.powi(j.unsigned_abs() as i32),
            })
        }
    }
}

/// Largest possible eigenvalue modulus from blocks outside `k_min..=k_max`,
/// when the family has a closed form.
pub fn omitted_level_bound(spec: &MapSpec, k_min: i64, k_max: i64) -> Option<f64> {
    // Level moduli decay in |j|, so the adjacent omitted levels dominate;
    // level 0 contributes 1 whenever it is omitted.
    let mut candidates = vec![k_max + 1, k_max + 2, k_min - 1, k_min - 2];
    if k_min > 0 || k_max < 0 {
        candidates.push(0);
    }
    let mut bound = 0.0f64;
    for j in candidates {
        if j >= k_min && j <= k_max {
            continue;
        }
        bound = bound.max(level_modulus(spec, j)?);
    }
    Some(bound)
}

/// The two `T` parameters of a composition of exactly two `T` factors.
fn two_t_factors(spec: &MapSpec) -> Option<(BlaschkeParam, BlaschkeParam)> {
    let seq = spec.operator_sequence();
    match seq.as_slice() {
        [MapSpec::T { lambda: l }, MapSpec::T { lambda: mu }] => Some((*l, *mu)),
        _ => None,
    }
}

/// Closed-form nonzero spectrum of the supported families, floored at
/// `modulus_floor` and optionally capped at total exponent degree
/// `max_degree` (needed to align with a computed `|k| ≤ K` window for the
/// two-parameter product family, where a modulus floor alone cannot express
/// the window).
pub fn theoretical_spectrum(
    spec: &MapSpec,
    modulus_floor: f64,
    max_degree: Option<i64>,
) -> Result<SpectrumMultiset> {
    let one = Complex64::new(1.0, 0.0);
    let mut items: Vec<(Complex64, usize, Provenance)> = Vec::new();
    let th = Provenance::Theory;
    let floor = modulus_floor;

    // Largest exponent with base^e above the floor.
    let exponent_cap = |base: f64| -> i64 {
        if base <= 0.0 {
            return 0;
        }
        if floor <= 0.0 {
            return max_degree.unwrap_or(64);
        }
        let by_floor = if base >= 1.0 {
            i64::MAX
        } else {
            (floor.ln() / base.ln()).floor() as i64 + 1
        };
        max_degree.unwrap_or(i64::MAX).min(by_floor).max(0)
    };

    match spec {
        MapSpec::B { lambda } | MapSpec::Bk { lambda, .. } => {
            let eff = match spec {
                MapSpec::Bk { k, .. } => lambda.power(*k),
                _ => lambda.lambda(),
            };
            items.push((one, 1, th));
            let cap = exponent_cap(eff.norm());
            let mut p = one;
            for _ in 1..=cap {
                p *= eff;
                items.push((p, 1, th));
                items.push((p.conj(), 1, th));
            }
        }
        MapSpec::T { lambda } | MapSpec::Tk { lambda, .. } => {
            let eff = match spec {
                MapSpec::Tk { k, .. } => lambda.power(*k),
                _ => lambda.lambda(),
            };
            let root = eff.sqrt();
            items.push((one, 1, th));
            let cap = exponent_cap(root.norm());
            // Pure powers ω λ₁^k and ω conj(λ₁)^k with multiplicity N(k, ω).
            for k in 1..=cap {
                let n_plus = (k / 2 + 1) as usize;
                let n_minus = ((k + 1) / 2) as usize;
                let p = root.powi(k as i32);
                for v in [p, p.conj()] {
                    items.push((v, n_plus, th));
                    items.push((-v, n_minus, th));
                }
            }
            // Mixed powers ±λ₁^a conj(λ₁)^b, a, b ≥ 1, each simple.
            for a in 1..=cap {
                for b in 1..=(cap - a).max(0) {
                    let v = root.powi(a as i32) * root.conj().powi(b as i32);
                    items.push((v, 1, th));
                    items.push((-v, 1, th));
                }
            }
        }
        MapSpec::Compose(_) => {
            let (l, mu) = two_t_factors(spec).ok_or(Error::UnsupportedSpec)?;
            let (l, mu) = (l.lambda(), mu.lambda());
            let cap = exponent_cap(l.norm().max(mu.norm()));
            items.push((one, 1, th));
            for m in -cap..=cap {
                for n in -(cap - m.abs())..=(cap - m.abs()) {
                    if m == 0 && n == 0 {
                        continue;
                    }
                    let lf = if m >= 0 { l.powi(m as i32) } else { l.conj().powi(-m as i32) };
                    let mf = if n >= 0 { mu.powi(n as i32) } else { mu.conj().powi(-n as i32) };
                    items.push((lf * mf, 1, th));
                }
            }
        }
    }
    items.retain(|(v, _, _)| passes_floor(v.norm(), floor) && v.norm() > 0.0);
    Ok(coalesce(items, floor, None))
}

#[derive(Debug, Clone)]
pub struct MatchedPair {
    pub computed: Complex64,
    pub theoretical: Complex64,
    pub distance: f64,
}

/// Multiplicity-aware pairing of a computed against a theoretical multiset.
#[derive(Debug, Clone)]
pub struct MatchReport {
    pub matched: Vec<MatchedPair>,
    pub missing_theoretical: Vec<Complex64>,
    pub spurious_computed: Vec<Complex64>,
    pub max_distance: f64,
    pub tolerance: f64,
}

impl MatchReport {
    pub fn is_clean(&self) -> bool {
        self.missing_theoretical.is_empty() && self.spurious_computed.is_empty()
    }
}

/// Greedy nearest-neighbour assignment on modulus-sorted flattened
/// multisets, followed by a verification pass over the pairs.
pub fn match_spectra(
    computed: &SpectrumMultiset,
    theoretical: &SpectrumMultiset,
    tol: f64,
) -> MatchReport {
    let comp = computed.flatten();
    let mut theo: Vec<(Complex64, bool)> =
        theoretical.flatten().into_iter().map(|v| (v, false)).collect();
    let mut matched = Vec::new();
    let mut spurious = Vec::new();
    for &c in &comp {
        let mut best: Option<(usize, f64)> = None;
        for (i, &(t, used)) in theo.iter().enumerate() {
            if used {
                continue;
            }
            let d = (c - t).norm();
            if d <= tol && best.map_or(true, |(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        match best {
            Some((i, d)) => {
                theo[i].1 = true;
                matched.push(MatchedPair { computed: c, theoretical: theo[i].0, distance: d });
            }
            None => spurious.push(c),
        }
    }
    let missing: Vec<Complex64> =
        theo.into_iter().filter(|&(_, used)| !used).map(|(v, _)| v).collect();
    // Verification pass: distances are consistent and within tolerance.
    let mut max_distance = 0.0f64;
    for p in &matched {
        let d = (p.computed - p.theoretical).norm();
        debug_assert!(d <= tol);
        max_distance = max_distance.max(d);
    }
    MatchReport {
        matched,
        missing_theoretical: missing,
        spurious_computed: spurious,
        max_distance,
        tolerance: tol,
    }
}
