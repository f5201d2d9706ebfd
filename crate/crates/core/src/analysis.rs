//! Hilbert–Schmidt norm estimation, compactness and boundedness diagnostics,
//! analytic-membership checks, and the correlation-decay experiment that
//! ties the computed spectra back to the dynamics.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blaschke::{self, BlaschkeParam};
use crate::error::{Error, Result};
use crate::lattice::{MonomialIndex, SpaceConfig, WeightFamily};
use crate::operator::{apply_map, MapSpec, Truncation};

/// A finitely supported Laurent series `f(z,w) = Σ b_{m,n} z^m w^n`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LaurentPolynomial {
    terms: BTreeMap<MonomialIndex, Complex64>,
}

impl LaurentPolynomial {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (MonomialIndex, Complex64)>,
    {
        let mut out = Self::new();
        for (idx, c) in terms {
            out.insert(idx, c);
        }
        out
    }

    pub fn monomial(idx: MonomialIndex) -> Self {
        Self::from_terms([(idx, Complex64::new(1.0, 0.0))])
    }

    pub fn insert(&mut self, idx: MonomialIndex, coeff: Complex64) {
        if coeff == Complex64::new(0.0, 0.0) {
            self.terms.remove(&idx);
        } else {
            self.terms.insert(idx, coeff);
        }
    }

    pub fn coefficient(&self, idx: MonomialIndex) -> Complex64 {
        self.terms.get(&idx).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (MonomialIndex, Complex64)> + '_ {
        self.terms.iter().map(|(&i, &c)| (i, c))
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    /// Plain `ℓ²` norm of the coefficients (the `L²(μ)` norm of `f`).
    pub fn l2_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// `‖f‖` in the configured space: `(Σ |b_{m,n}|² ‖e_{m,n}‖²)^{1/2}`.
///
/// Every finitely supported series lies in every configuration; the
/// companion predicate [`geometric_series_converges`] covers the full
/// geometric coefficient families.
pub fn space_norm(f: &LaurentPolynomial, cfg: &SpaceConfig) -> f64 {
    f.terms()
        .map(|(idx, c)| c.norm_sqr() * (2.0 * cfg.log_weight(idx)).exp())
        .sum::<f64>()
        .sqrt()
}

/// Worst-case exponential growth rate of the weights along unit-radius
/// lattice directions: `a` for the `deg₁` family, `aφ` for `deg_φ`, and
/// `a/2` for the symmetrised golden-ratio family (attained along the stable
/// direction of the linear map).
pub fn weight_growth_rate(cfg: &SpaceConfig) -> f64 {
    match cfg.family() {
        WeightFamily::Deg1 => cfg.a(),
        WeightFamily::DegPhi => cfg.a() * cfg.phi(),
        WeightFamily::SymmetricFr => 0.5 * cfg.a(),
    }
}

/// Whether the full series with `|b_{m,n}| = ρ^{|m|+|n|}` has finite norm
/// under `cfg`: true when the weight growth rate is below `-log ρ`.
pub fn geometric_series_converges(rho: f64, cfg: &SpaceConfig) -> bool {
    rho > 0.0 && rho < 1.0 && weight_growth_rate(cfg) < -rho.ln()
}

/// Result of a Hilbert–Schmidt norm estimate over a finite lattice square.
#[derive(Debug, Clone)]
pub struct HsNormReport {
    /// `Σ (‖C e_{m,n}‖ / ‖e_{m,n}‖)²` over `|m|, |n| ≤ radius`, tails folded.
    pub value: f64,
    pub per_column: BTreeMap<MonomialIndex, f64>,
    /// For the `T` families on `deg_φ` weights: whether the compactness
    /// hypothesis `φ > 1` and `2a(φ-1) < -log M_{a,λ}` holds. `None` when
    /// not applicable. A violation is a warning, not an error.
    pub hypothesis_ok: Option<bool>,
}

fn hs_hypothesis(spec: &MapSpec, cfg: &SpaceConfig) -> Option<bool> {
    let check = |lams: Vec<BlaschkeParam>| -> bool {
        let a = cfg.a();
        let phi = cfg.phi();
        let worst = lams
            .iter()
            .map(|l| blaschke::contraction_factor(*l, a).expect("validated"))
            .fold(0.0f64, f64::max);
        phi > 1.0 && 2.0 * a * (phi - 1.0) < -worst.ln()
    };
    match (spec, cfg.family()) {
        (MapSpec::T { lambda } | MapSpec::Tk { lambda, .. }, WeightFamily::DegPhi) => {
            Some(check(vec![*lambda]))
        }
        (MapSpec::Compose(_), WeightFamily::DegPhi) => {
            let lams: Vec<BlaschkeParam> = spec
                .operator_sequence()
                .iter()
                .filter_map(|f| match f {
                    MapSpec::T { lambda } | MapSpec::Tk { lambda, .. } => Some(*lambda),
                    _ => None,
                })
                .collect();
            if lams.is_empty() {
                None
            } else {
                Some(check(lams))
            }
        }
        _ => None,
    }
}

/// Squared column ratio `(‖C e_{m,n}‖/‖e_{m,n}‖)²` with the truncation tail
/// folded in. For a primitive map the retained entries and the remainder are
/// orthogonal, so the fold is Pythagorean; for compositions the accumulated
/// drops are combined by the triangle inequality instead.
pub fn column_ratio_sqr(
    spec: &MapSpec,
    idx: MonomialIndex,
    order: usize,
    cfg: &SpaceConfig,
) -> f64 {
    let col = apply_map(spec, idx, Truncation::exact(order), cfg);
    match spec {
        MapSpec::Compose(_) => {
            let retained: f64 = col
                .entries
                .iter()
                .map(|&(t, c)| c.norm_sqr() * (2.0 * cfg.log_weight(t)).exp())
                .sum();
            let num = retained.sqrt() + col.tail_weight;
            num * num * (-2.0 * cfg.log_weight(idx)).exp()
        }
        _ => col.weighted_ratio_sqr(cfg),
    }
}

/// The closed-form per-column decay exponent `δ` when the paper provides
/// one: `min(-½ log M_{a,λ}, a)` for `B_λ` on `deg₁` weights, and
/// `min(2aφ⁻¹(φ-1), 2a(1-φ) - log M_{a,λ})` for `T_λ` on `deg_φ` weights
/// with `φ > 1`.
pub fn per_column_delta(spec: &MapSpec, cfg: &SpaceConfig) -> Option<f64> {
    match (spec, cfg.family()) {
        (MapSpec::B { lambda }, WeightFamily::Deg1) => {
            let m = blaschke::contraction_factor(*lambda, cfg.a()).ok()?;
            Some((-0.5 * m.ln()).min(cfg.a()))
        }
        (MapSpec::T { lambda }, WeightFamily::DegPhi) if cfg.phi() > 1.0 => {
            let a = cfg.a();
            let phi = cfg.phi();
            let m = blaschke::contraction_factor(*lambda, a).ok()?;
            let delta = (2.0 * a * (phi - 1.0) / phi).min(2.0 * a * (1.0 - phi) - m.ln());
            (delta > 0.0).then_some(delta)
        }
        _ => None,
    }
}

/// Hilbert–Schmidt norm estimate `Σ_{|m|,|n| ≤ radius} ratio²` with
/// per-column detail.
pub fn hs_norm(
    spec: &MapSpec,
    cfg: &SpaceConfig,
    radius: i64,
    order: usize,
) -> Result<HsNormReport> {
    if radius < 0 {
        return Err(Error::EmptyWindow { k_min: radius, k_max: radius });
    }
    let mut per_column = BTreeMap::new();
    let mut value = 0.0;
    for m in -radius..=radius {
        for n in -radius..=radius {
            let idx = MonomialIndex::new(m, n);
            let r = column_ratio_sqr(spec, idx, order, cfg);
            value += r;
            per_column.insert(idx, r);
        }
    }
    Ok(HsNormReport { value, per_column, hypothesis_ok: hs_hypothesis(spec, cfg) })
}

/// Column ratios `‖C_{T_λ} e_{m,n}‖ / ‖e_{m,n}‖` for `n` in `n_list`.
///
/// Under swap-symmetric weights (`‖e_{m,n}‖ = ‖e_{n,m}‖`, i.e. the `deg₁` or
/// symmetrised golden-ratio families) every ratio is at least `|λ|^m`: the
/// leading expansion term alone contributes exactly that, which is the
/// non-compactness obstruction. Under admissible `deg_φ` weights the same
/// ratios decay in `n`; the contrast is the point of the diagnostic.
pub fn compactness_violation(
    lambda: BlaschkeParam,
    m: u32,
    n_list: &[i64],
    cfg: &SpaceConfig,
) -> Result<Vec<f64>> {
    if lambda.lambda() == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroLambda);
    }
    if m < 1 {
        return Err(Error::InvalidMapOrder { k: m });
    }
    let max_order = 4096usize;
    let coeffs = blaschke::coefficients(lambda, m, max_order);
    let mut out = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let src = MonomialIndex::new(m as i64, n);
        let log_w_src = cfg.log_weight(src);
        let mut acc = 0.0f64;
        for (k, c) in coeffs.coeffs.iter().enumerate() {
            let csq = c.norm_sqr();
            if csq == 0.0 {
                continue;
            }
            let target = MonomialIndex::new(n + k as i64, m as i64);
            let term = csq * (2.0 * (cfg.log_weight(target) - log_w_src)).exp();
            acc += term;
            if k > 64 && term < acc * 1e-28 {
                break;
            }
        }
        out.push(acc.sqrt());
    }
    Ok(out)
}

/// A certified unboundedness witness for `C_{T_λ}` on `deg_φ` weights in the
/// regime `-log|λ| < a(φ-1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnboundednessWitness {
    pub index: MonomialIndex,
    /// Lower bound `|λ|^m e^{a(φ-1)(m+n)}` on the column ratio at `index`.
    pub ratio: f64,
}

/// Finds `(m, n)` with `m > 0 > n` whose column-ratio lower bound
/// `|λ|^m e^{a(φ-1)(m+n)}` exceeds `threshold`, certifying unboundedness.
pub fn unboundedness_witness(
    lambda: BlaschkeParam,
    a: f64,
    phi: f64,
    threshold: f64,
) -> Result<UnboundednessWitness> {
    if lambda.lambda() == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroLambda);
    }
    if !(a > 0.0) {
        return Err(Error::InvalidWeightExponent { a });
    }
    if !(phi >= 1.0) {
        return Err(Error::InvalidPhi { phi });
    }
    let drift = a * (phi - 1.0);
    let log_lambda = lambda.modulus().ln();
    if !(-log_lambda < drift) {
        return Err(Error::RegimeNotSatisfied);
    }
    let lower_bound = |m: i64, n: i64| -> f64 {
        (m as f64 * log_lambda + drift * (m + n) as f64).exp()
    };
    // n = -1; the growth per unit m is |λ| e^{a(φ-1)} > 1.
    let n = -1i64;
    let growth = log_lambda + drift;
    let mut m = (((threshold.ln() + drift) / growth).ceil() as i64).max(1);
    while lower_bound(m, n) < threshold {
        m += 1;
    }
    Ok(UnboundednessWitness { index: MonomialIndex::new(m, n), ratio: lower_bound(m, n) })
}

/// One correlation sample with its truncation-error indicator.
#[derive(Debug, Clone, Copy)]
pub struct CorrelationSample {
    pub m: usize,
    pub value: Complex64,
    /// Bound on the truncation error of `value`: accumulated dropped
    /// coefficient mass in `ℓ²` times `‖g‖₂`.
    pub tail_bound: f64,
    /// Truncation starvation: the tail bound exceeds `|value|`.
    pub starved: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct FitSummary {
    pub fitted_log_slope: f64,
    pub fitted_rate: f64,
    pub residual: f64,
}

/// The sampled correlation sequence and the least-squares decay fit.
#[derive(Debug, Clone)]
pub struct DecayFit {
    pub samples: Vec<CorrelationSample>,
    pub window: (usize, usize),
    /// `None` when the window has fewer than four usable (nonzero) samples.
    pub fit: Option<FitSummary>,
}

/// Ordinary least squares on `(m, log|value|)` over the inclusive window.
pub fn fit_decay(samples: &[(usize, Complex64)], window: (usize, usize)) -> Result<FitSummary> {
    let usable: Vec<(f64, f64)> = samples
        .iter()
        .filter(|&&(m, v)| m >= window.0 && m <= window.1 && v.norm() > 0.0)
        .map(|&(m, v)| (m as f64, v.norm().ln()))
        .collect();
    if usable.len() < 4 {
        return Err(Error::FitWindowTooSmall { needed: 4, found: usable.len() });
    }
    let n = usable.len() as f64;
    let sx: f64 = usable.iter().map(|p| p.0).sum();
    let sy: f64 = usable.iter().map(|p| p.1).sum();
    let sxx: f64 = usable.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = usable.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let residual = (usable
        .iter()
        .map(|&(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(FitSummary { fitted_log_slope: slope, fitted_rate: slope.exp(), residual })
}

/// Correlation experiment: iterates the composition operator on `f` and
/// records `corr(m) = Σ_{p,q} c^{(m)}_{p,q} g_{-p,-q} - c^{(0)}_{0,0} g_{0,0}`
/// against the SRB (normalised area) measure, then fits the decay rate over
/// `window` (default `[m_max/4, m_max]`).
pub fn correlate(
    spec: &MapSpec,
    f: &LaurentPolynomial,
    g: &LaurentPolynomial,
    m_max: usize,
    trunc: Truncation,
    window: Option<(usize, usize)>,
    cfg: &SpaceConfig,
) -> DecayFit {
    let g_l2 = g.l2_norm();
    let product_mean = |state: &BTreeMap<MonomialIndex, Complex64>| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, gv) in g.terms() {
            let neg = MonomialIndex::new(-idx.m, -idx.n);
            if let Some(&c) = state.get(&neg) {
                acc += c * gv;
            }
        }
        acc
    };

    let mut state: BTreeMap<MonomialIndex, Complex64> = f.terms().collect();
    let mean_product =
        f.coefficient(MonomialIndex::new(0, 0)) * g.coefficient(MonomialIndex::new(0, 0));
    let mut tail_l2 = 0.0f64;
    let mut samples = Vec::with_capacity(m_max + 1);
    let record = |samples: &mut Vec<CorrelationSample>,
                  m: usize,
                  state: &BTreeMap<MonomialIndex, Complex64>,
                  tail_l2: f64| {
        let value = product_mean(state) - mean_product;
        let tail_bound = tail_l2 * g_l2;
        samples.push(CorrelationSample { m, value, tail_bound, starved: tail_bound > value.norm() });
    };
    record(&mut samples, 0, &state, tail_l2);

    for m in 1..=m_max {
        let mut next: BTreeMap<MonomialIndex, Complex64> = BTreeMap::new();
        for (&src, &coef) in &state {
            if coef == Complex64::new(0.0, 0.0) {
                continue;
            }
            let col = apply_map(spec, src, trunc, cfg);
            // ℓ² mass beyond the per-column order: the expansion
            // coefficients square-sum to one, so the remainder of a unit
            // column has mass sqrt(1 - Σ_retained |α|²).
            let retained_energy: f64 = col.entries.iter().map(|e| e.1.norm_sqr()).sum();
            tail_l2 += coef.norm() * (1.0 - retained_energy).max(0.0).sqrt();
            for &(target, alpha) in &col.entries {
                let v = coef * alpha;
                if v == Complex64::new(0.0, 0.0) {
                    continue;
                }
                if target.radius() > trunc.max_radius {
                    tail_l2 += v.norm();
                    continue;
                }
                *next.entry(target).or_insert(Complex64::new(0.0, 0.0)) += v;
            }
        }
        state = next;
        record(&mut samples, m, &state, tail_l2);
    }

    let window = window.unwrap_or((m_max / 4, m_max));
    let flat: Vec<(usize, Complex64)> = samples.iter().map(|s| (s.m, s.value)).collect();
    let fit = fit_decay(&flat, window).ok();
    DecayFit { samples, window, fit }
}

/// Reproducible "generic" observable pairs: coefficients
/// `b_{m,n} = 0.5^{|m|+|n|} u_{m,n}` on `|m|, |n| ≤ 3` with `u` drawn from a
/// fixed-seed unit-disk sampler.
pub fn seeded_observables(seed: u64, count: usize) -> Vec<(LaurentPolynomial, LaurentPolynomial)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> LaurentPolynomial {
        let mut f = LaurentPolynomial::new();
        for m in -3i64..=3 {
            for n in -3i64..=3 {
                let u = loop {
                    let re: f64 = rng.gen_range(-1.0..=1.0);
                    let im: f64 = rng.gen_range(-1.0..=1.0);
                    let u = Complex64::new(re, im);
                    if u.norm_sqr() <= 1.0 {
                        break u;
                    }
                };
                f.insert(MonomialIndex::new(m, n), u * 0.5f64.powi((m.abs() + n.abs()) as i32));
            }
        }
        f
    };
    (0..count).map(|_| (draw(&mut rng), draw(&mut rng))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::SpaceConfig;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lam(re: f64, im: f64) -> BlaschkeParam {
        BlaschkeParam::new(c(re, im)).unwrap()
    }

    fn idx(m: i64, n: i64) -> MonomialIndex {
        MonomialIndex::new(m, n)
    }

    #[test]
    fn space_norm_examples() {
        let cfg = SpaceConfig::deg1(0.5).unwrap();
        assert_eq!(space_norm(&LaurentPolynomial::monomial(idx(0, 0)), &cfg), 1.0);
        let f = LaurentPolynomial::monomial(idx(1, -1));
        assert!((space_norm(&f, &cfg) - 1.0f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn geometric_convergence_predicate() {
        // ρ = e^{-0.2}, a = 0.05, φ = 2: aφ = 0.1 < 0.2 converges.
        let cfg = SpaceConfig::degphi(0.05, 2.0).unwrap();
        assert!(geometric_series_converges((-0.2f64).exp(), &cfg));
        // aφ = 0.3 > 0.2 diverges.
        let cfg = SpaceConfig::degphi(0.15, 2.0).unwrap();
        assert!(!geometric_series_converges((-0.2f64).exp(), &cfg));
    }

    #[test]
    fn hs_norm_b0_is_explicit_sum() {
        // λ = 0 columns have a single entry; each ratio² is
        // e^{-2a(deg₁(target) - deg₁(source))}.
        let cfg = SpaceConfig::deg1(0.4).unwrap();
        let spec = MapSpec::b(lam(0.0, 0.0));
        let report = hs_norm(&spec, &cfg, 6, 16).unwrap();
        let mut expected = 0.0;
        for m in -6i64..=6 {
            for n in -6i64..=6 {
                let (tm, tn) = (2 * m + n, m + n);
                let d = crate::lattice::deg1(idx(tm, tn)) - crate::lattice::deg1(idx(m, n));
                expected += (-2.0 * 0.4 * d as f64).exp();
            }
        }
        assert!((report.value - expected).abs() < 1e-6);
        for (&i, &r) in &report.per_column {
            let _ = i;
            assert!(r <= 1.0 + 1e-12);
        }
        assert_eq!(report.hypothesis_ok, None);
    }

    #[test]
    fn hs_per_column_bounds_for_b() {
        let cfg = SpaceConfig::deg1(0.5).unwrap();
        let l = lam(0.5, 0.0);
        let spec = MapSpec::b(l);
        let delta = per_column_delta(&spec, &cfg).unwrap();
        let report = hs_norm(&spec, &cfg, 20, 96).unwrap();
        for (&i, &r) in &report.per_column {
            let bound = (-delta * (i.m.abs() + i.n.abs()) as f64).exp();
            assert!(r <= bound * (1.0 + 1e-12), "{i:?}: {r} > {bound}");
        }
        // Eq. (10) chain: ratio² ≤ e^{-2a|m|} M^{|m+n|} for m+n ≠ 0.
        let m_factor = blaschke::contraction_factor(l, 0.5).unwrap();
        for (&i, &r) in &report.per_column {
            if i.m + i.n == 0 {
                continue;
            }
            let chain =
                (-2.0 * 0.5 * i.m.abs() as f64).exp() * m_factor.powi((i.m + i.n).abs() as i32);
            assert!(r <= chain * (1.0 + 1e-12), "{i:?}");
        }
    }

    #[test]
    fn hs_per_column_bounds_for_t_admissible() {
        let a = 0.5;
        let phi = 1.25;
        let cfg = SpaceConfig::degphi(a, phi).unwrap();
        let l = lam(0.5, 0.0);
        let spec = MapSpec::t(l);
        let report = hs_norm(&spec, &cfg, 20, 96).unwrap();
        assert_eq!(report.hypothesis_ok, Some(true));
        let delta = per_column_delta(&spec, &cfg).unwrap();
        for (&i, &r) in &report.per_column {
            let bound = (-delta * (i.m.abs() + i.n.abs()) as f64).exp();
            assert!(r <= bound * (1.0 + 1e-12), "{i:?}: {r} > {bound}");
        }
    }

    #[test]
    fn hs_hypothesis_flags_violation() {
        // Large a(φ-1) violates the compactness hypothesis.
        let cfg = SpaceConfig::degphi(1.0, 3.0).unwrap();
        let spec = MapSpec::t(lam(0.5, 0.0));
        let report = hs_norm(&spec, &cfg, 2, 8).unwrap();
        assert_eq!(report.hypothesis_ok, Some(false));
    }

    #[test]
    fn compactness_ratios_bounded_below_under_symmetric_weights() {
        let l = lam(0.5, 0.0);
        let cfg = SpaceConfig::symmetric_fr(0.5).unwrap();
        let ns: Vec<i64> = (1..=100).collect();
        let ratios = compactness_violation(l, 1, &ns, &cfg).unwrap();
        for (n, r) in ns.iter().zip(&ratios) {
            assert!(*r >= 0.5, "n={n}: {r}");
        }
        // deg₁ weights are symmetric too.
        let cfg = SpaceConfig::deg1(0.5).unwrap();
        let ratios = compactness_violation(l, 1, &ns, &cfg).unwrap();
        for r in &ratios {
            assert!(*r >= 0.5);
        }
        // Admissible deg_φ weights: ratios fall well below |λ|^m.
        let cfg = SpaceConfig::degphi(0.5, 1.25).unwrap();
        let ratios = compactness_violation(l, 1, &[50, 80, 100], &cfg).unwrap();
        for r in &ratios {
            assert!(*r < 0.25, "{r}");
        }
        assert!(compactness_violation(lam(0.0, 0.0), 1, &[1], &cfg).is_err());
    }

    #[test]
    fn unboundedness_witness_examples() {
        // a(φ-1) = 1, λ = 0.5: the witness ratio must clear the threshold.
        let w = unboundedness_witness(lam(0.5, 0.0), 1.0, 2.0, 1e3).unwrap();
        assert!(w.ratio >= 1e3);
        assert!(w.index.m > 0 && w.index.n < 0);
        // Ratio formula at (1, -1) is |λ| e^{a(φ-1)·0} = |λ|.
        let drift = 1.0;
        let bound = 0.5f64.powi(1) * (drift * 0.0f64).exp();
        assert!((bound - 0.5).abs() < 1e-15);
        // Regime violation rejected: -log|λ| too large.
        assert!(matches!(
            unboundedness_witness(lam(0.05, 0.0), 1.0, 2.0, 1e3),
            Err(Error::RegimeNotSatisfied)
        ));
    }

    #[test]
    fn fit_decay_recovers_exact_geometric() {
        let rho = 0.62f64;
        let samples: Vec<(usize, Complex64)> =
            (0..=20).map(|m| (m, c(3.0 * rho.powi(m as i32), 0.0))).collect();
        let fit = fit_decay(&samples, (5, 20)).unwrap();
        assert!((fit.fitted_rate - rho).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        // Alternating sign: the fit is on moduli.
        let samples: Vec<(usize, Complex64)> =
            (0..=20).map(|m| (m, c((-rho).powi(m as i32), 0.0))).collect();
        let fit = fit_decay(&samples, (5, 20)).unwrap();
        assert!((fit.fitted_rate - rho).abs() < 1e-12);
    }

    #[test]
    fn fit_decay_two_rates_late_window() {
        let (r1, r2) = (0.7f64, 0.2f64);
        let samples: Vec<(usize, Complex64)> = (0..=30)
            .map(|m| (m, c(0.8 * r1.powi(m as i32) + 5.0 * r2.powi(m as i32), 0.0)))
            .collect();
        let fit = fit_decay(&samples, (20, 30)).unwrap();
        assert!((fit.fitted_rate - r1).abs() < 1e-3);
    }

    #[test]
    fn fit_decay_refuses_thin_windows() {
        let samples: Vec<(usize, Complex64)> = vec![(0, c(1.0, 0.0)), (1, c(0.5, 0.0))];
        assert!(matches!(
            fit_decay(&samples, (0, 1)),
            Err(Error::FitWindowTooSmall { needed: 4, found: 2 })
        ));
        let zeros: Vec<(usize, Complex64)> = (0..10).map(|m| (m, c(0.0, 0.0))).collect();
        assert!(fit_decay(&zeros, (0, 9)).is_err());
    }

    #[test]
    fn correlation_of_constants_vanishes() {
        let cfg = SpaceConfig::deg1(0.5).unwrap();
        let spec = MapSpec::b(lam(0.4, 0.2));
        let f = LaurentPolynomial::monomial(idx(0, 0));
        let g = LaurentPolynomial::from_terms([
            (idx(0, 0), c(2.0, 0.0)),
            (idx(1, 2), c(0.5, 0.5)),
        ]);
        let fit = correlate(&spec, &f, &g, 8, Truncation::new(32, 0.0, 30), None, &cfg);
        for s in &fit.samples {
            assert_eq!(s.value, c(0.0, 0.0));
        }
        assert!(fit.fit.is_none());
    }

    #[test]
    fn cat_map_correlations_terminate() {
        // B₀ on monomials: the exponent escapes any finite support, so the
        // correlation is eventually exactly zero.
        let cfg = SpaceConfig::deg1(0.5).unwrap();
        let spec = MapSpec::b(lam(0.0, 0.0));
        // B₀ sends the exponent (1,0) along (2,1), (5,3), (13,8), ...
        let f = LaurentPolynomial::monomial(idx(1, 0));
        let g = LaurentPolynomial::from_terms([
            (idx(-1, 0), c(1.0, 0.0)),
            (idx(-2, -1), c(1.0, 0.0)),
            (idx(-5, -3), c(1.0, 0.0)),
        ]);
        let fit = correlate(&spec, &f, &g, 10, Truncation::new(64, 0.0, 1 << 20), None, &cfg);
        for s in fit.samples.iter().take(3) {
            assert_eq!(s.value, c(1.0, 0.0), "m={}", s.m);
        }
        for s in fit.samples.iter().skip(3) {
            assert_eq!(s.value, c(0.0, 0.0), "m={}", s.m);
        }
    }

    #[test]
    fn correlation_rate_tracks_leading_resonance() {
        let cfg = SpaceConfig::deg1(0.5).unwrap();
        let spec = MapSpec::b(lam(0.5, 0.0));
        let pairs = seeded_observables(1, 1);
        let (f, g) = &pairs[0];
        let fit = correlate(&spec, f, g, 20, Truncation::new(60, 1e-16, 40), Some((5, 18)), &cfg);
        let rate = fit.fit.expect("usable window").fitted_rate;
        assert!((rate - 0.5).abs() <= 0.05, "rate {rate}");
    }

    #[test]
    fn seeded_observables_are_reproducible() {
        let a = seeded_observables(7, 2);
        let b = seeded_observables(7, 2);
        assert_eq!(a.len(), 2);
        for ((f1, g1), (f2, g2)) in a.iter().zip(&b) {
            assert_eq!(f1, f2);
            assert_eq!(g1, g2);
        }
        // 7x7 support with unit-disk factors.
        for (f, g) in &a {
            assert_eq!(f.support_len(), 49);
            assert_eq!(g.support_len(), 49);
            for (i, v) in f.terms() {
                assert!(v.norm() <= 0.5f64.powi((i.m.abs() + i.n.abs()) as i32) + 1e-15);
            }
        }
    }
}
