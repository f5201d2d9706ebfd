//! Degree functions on the exponent lattice, anisotropic weights, and
//! enumeration of degree level sets.
//!
//! The monomials `e_{m,n}(z,w) = z^m w^n` are indexed by `(m,n) ∈ ℤ²`. The
//! degree `deg₁(m,n) = sign(mn)(|m| + |n|)` (with `sign(0) = +1`) splits the
//! lattice into finite level sets `D_k`; the composition operators treated in
//! [`crate::operator`] never decrease this degree, which is what makes their
//! matrices block-triangular. Weights `‖e_{m,n}‖ = e^{-a·deg}` (and variants)
//! turn the coefficient space into the anisotropic Hilbert spaces the
//! operators act compactly on.

use crate::error::{Error, Result};

/// Exponent pair `(m, n)` of the monomial `z^m w^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialIndex {
    pub m: i64,
    pub n: i64,
}

impl MonomialIndex {
    pub const fn new(m: i64, n: i64) -> Self {
        Self { m, n }
    }

    /// `|m| + |n|`, the lattice radius used by truncation windows.
    pub fn radius(self) -> i64 {
        self.m.abs() + self.n.abs()
    }
}

impl From<(i64, i64)> for MonomialIndex {
    fn from((m, n): (i64, i64)) -> Self {
        Self { m, n }
    }
}

/// `sign` with the convention `sign(0) = +1`.
fn sign(k: i64) -> i64 {
    if k >= 0 {
        1
    } else {
        -1
    }
}

/// `deg₁(m,n) = sign(mn)(|m| + |n|)`, `sign(0) = +1`.
pub fn deg1(idx: MonomialIndex) -> i64 {
    sign(idx.m.saturating_mul(idx.n)) * (idx.m.abs() + idx.n.abs())
}

/// `deg_φ(m,n) = |m| + φ⁻¹|n|` if `mn ≥ 0`, else `-|m| - φ|n|`, for `φ ≥ 1`.
///
/// `φ = 1` collapses both cases to `deg₁`. Block decomposition always uses
/// `deg₁`; `deg_φ` only enters through the weights.
pub fn degphi(idx: MonomialIndex, phi: f64) -> Result<f64> {
    if !(phi >= 1.0) {
        return Err(Error::InvalidPhi { phi });
    }
    let (am, an) = (idx.m.abs() as f64, idx.n.abs() as f64);
    if idx.m.saturating_mul(idx.n) >= 0 {
        Ok(am + an / phi)
    } else {
        Ok(-am - phi * an)
    }
}

/// Weight families for the anisotropic norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightFamily {
    /// `‖e_{m,n}‖ = e^{-a·deg₁(m,n)}`.
    Deg1,
    /// `‖e_{m,n}‖ = e^{-a·deg_φ(m,n)}`.
    DegPhi,
    /// Symmetrised golden-ratio weights; see [`SpaceConfig::log_weight`].
    /// Satisfies `‖e_{m,n}‖ = ‖e_{n,m}‖`, the hypothesis of the
    /// non-compactness diagnostic.
    SymmetricFr,
}

const GOLDEN_PLUS: f64 = 1.618033988749894848; // (√5 + 1)/2
const GOLDEN_MINUS: f64 = -0.618033988749894848; // (1 - √5)/2

/// Parameters of one anisotropic space: weight exponent `a`, anisotropy
/// ratio `φ`, and the weight family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceConfig {
    a: f64,
    phi: f64,
    family: WeightFamily,
}

impl SpaceConfig {
    /// The `deg₁` space with exponent `a > 0` (forces `φ = 1`).
    pub fn deg1(a: f64) -> Result<Self> {
        Self::validate(a, 1.0, WeightFamily::Deg1)
    }

    /// The `deg_φ` space with exponent `a > 0` and ratio `φ ≥ 1`.
    pub fn degphi(a: f64, phi: f64) -> Result<Self> {
        Self::validate(a, phi, WeightFamily::DegPhi)
    }

    /// The symmetrised golden-ratio space with exponent `a > 0`.
    pub fn symmetric_fr(a: f64) -> Result<Self> {
        Self::validate(a, 1.0, WeightFamily::SymmetricFr)
    }

    fn validate(a: f64, phi: f64, family: WeightFamily) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::InvalidWeightExponent { a });
        }
        if !(phi >= 1.0) {
            return Err(Error::InvalidPhi { phi });
        }
        Ok(Self { a, phi, family })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn family(&self) -> WeightFamily {
        self.family
    }

    /// `log ‖e_{m,n}‖` for this configuration.
    ///
    /// For the golden-ratio family the exponent is the arithmetic mean of the
    /// classical anisotropic exponent at `(m,n)` and at `(n,m)`:
    /// `-a/2 (|γ₊m+n| + |γ₊n+m|) + a/2 (|γ₋m+n| + |γ₋n+m|)` with
    /// `γ± = (1 ± √5)/2`, which agrees with the unsymmetrised weight on the
    /// diagonal `m = n` and satisfies `‖e_{m,n}‖ = ‖e_{n,m}‖` everywhere.
    pub fn log_weight(&self, idx: MonomialIndex) -> f64 {
        match self.family {
            WeightFamily::Deg1 => -self.a * deg1(idx) as f64,
            WeightFamily::DegPhi => {
                -self.a * degphi(idx, self.phi).expect("phi validated at construction")
            }
            WeightFamily::SymmetricFr => {
                let (m, n) = (idx.m as f64, idx.n as f64);
                let unstable = (GOLDEN_PLUS * m + n).abs() + (GOLDEN_PLUS * n + m).abs();
                let stable = (GOLDEN_MINUS * m + n).abs() + (GOLDEN_MINUS * n + m).abs();
                0.5 * self.a * (stable - unstable)
            }
        }
    }

    /// `‖e_{m,n}‖`, strictly positive.
    pub fn weight(&self, idx: MonomialIndex) -> f64 {
        self.log_weight(idx).exp()
    }
}

/// One degree level set `D_k` in canonical (lexicographic) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub k: i64,
    pub indices: Vec<MonomialIndex>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Number of lattice points with `deg₁ = k`: 1 at `k = 0`, `2k + 2` for
/// `k ≥ 1`, `-2k - 2` for `k ≤ -2`, and 0 for `k = -1`.
pub fn block_size(k: i64) -> usize {
    match k {
        0 => 1,
        -1 => 0,
        k if k > 0 => (2 * k + 2) as usize,
        k => (-2 * k - 2) as usize,
    }
}

/// All `(m,n)` with `deg₁(m,n) = k`, lexicographically ordered.
pub fn block_indices(k: i64) -> Block {
    let mut indices = Vec::with_capacity(block_size(k));
    if k == 0 {
        indices.push(MonomialIndex::new(0, 0));
    } else if k > 0 {
        // mn >= 0 and |m| + |n| = k: both coordinates share a sign.
        for m in -k..=k {
            let r = k - m.abs();
            if m < 0 {
                indices.push(MonomialIndex::new(m, -r));
            } else if m == 0 {
                indices.push(MonomialIndex::new(0, -k));
                indices.push(MonomialIndex::new(0, k));
            } else {
                indices.push(MonomialIndex::new(m, r));
            }
        }
    } else if k <= -2 {
        // mn < 0 and |m| + |n| = -k: strictly opposite signs.
        let j = -k;
        for m in -(j - 1)..=(j - 1) {
            if m == 0 {
                continue;
            }
            let r = j - m.abs();
            indices.push(MonomialIndex::new(m, if m < 0 { r } else { -r }));
        }
    }
    debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
    Block { k, indices }
}

/// Concatenation of `block_indices(k)` for `k = k_min..=k_max`, block-major.
pub fn window_indices(k_min: i64, k_max: i64) -> Vec<MonomialIndex> {
    let mut out = Vec::new();
    for k in k_min..=k_max {
        out.extend(block_indices(k).indices);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn idx(m: i64, n: i64) -> MonomialIndex {
        MonomialIndex::new(m, n)
    }

    #[test]
    fn deg1_examples() {
        assert_eq!(deg1(idx(2, 1)), 3);
        assert_eq!(deg1(idx(1, -1)), -2);
        assert_eq!(deg1(idx(-3, 0)), 3);
        assert_eq!(deg1(idx(0, 0)), 0);
        assert_eq!(deg1(idx(0, -4)), 4);
    }

    #[test]
    fn degphi_examples() {
        assert_eq!(degphi(idx(1, 1), 2.0).unwrap(), 1.5);
        assert_eq!(degphi(idx(1, -1), 2.0).unwrap(), -3.0);
        assert!(degphi(idx(1, 1), 0.5).is_err());
    }

    #[test]
    fn degphi_at_one_collapses_to_deg1() {
        for m in -20..=20 {
            for n in -20..=20 {
                assert_eq!(degphi(idx(m, n), 1.0).unwrap(), deg1(idx(m, n)) as f64);
            }
        }
    }

    // Lemma: stepping the first coordinate by sign of the second raises deg₁
    // by at least one, and symmetrically. Exhaustive on |m|,|n| <= 200.
    #[test]
    fn degree_step_inequality_exhaustive() {
        for m in -200i64..=200 {
            for n in -200i64..=200 {
                let d = deg1(idx(m, n));
                if n != 0 {
                    assert!(deg1(idx(m + sign(n), n)) >= d + 1, "({m},{n})");
                }
                if m != 0 {
                    assert!(deg1(idx(m, n + sign(m))) >= d + 1, "({m},{n})");
                }
            }
        }
    }

    // Same step inequality for deg_φ; the step is real-valued.
    #[test]
    fn degphi_step_inequality() {
        for &phi in &[1.0, 1.25, 2.0, 5.0] {
            for m in -60i64..=60 {
                for n in -60i64..=60 {
                    if n == 0 {
                        continue;
                    }
                    let d0 = degphi(idx(m, n), phi).unwrap();
                    let d1 = degphi(idx(m + sign(n), n), phi).unwrap();
                    assert!(d1 >= d0 + 1.0 - 1e-12, "phi={phi} ({m},{n})");
                }
            }
        }
    }

    #[test]
    fn block_sizes_exhaustive() {
        for k in -100i64..=100 {
            let b = block_indices(k);
            assert_eq!(b.dim(), block_size(k), "k={k}");
            let expected = match k {
                0 => 1,
                -1 => 0,
                k if k > 0 => (2 * k + 2) as usize,
                k => (-2 * k - 2) as usize,
            };
            assert_eq!(b.dim(), expected);
            for &i in &b.indices {
                assert_eq!(deg1(i), k);
            }
            // Completeness: brute-force scan of the bounded square.
            let r = k.abs() + 1;
            let brute: Vec<_> = (-r..=r)
                .flat_map(|m| (-r..=r).map(move |n| idx(m, n)))
                .filter(|&i| deg1(i) == k)
                .collect();
            assert_eq!(b.indices, brute, "k={k}");
        }
    }

    #[test]
    fn block_examples() {
        assert_eq!(block_indices(0).indices, vec![idx(0, 0)]);
        assert_eq!(
            block_indices(2).indices,
            vec![idx(-2, 0), idx(-1, -1), idx(0, -2), idx(0, 2), idx(1, 1), idx(2, 0)]
        );
        assert_eq!(block_indices(-2).indices, vec![idx(-1, 1), idx(1, -1)]);
        assert!(block_indices(-1).is_empty());
    }

    #[test]
    fn window_examples() {
        assert_eq!(window_indices(0, 0), vec![idx(0, 0)]);
        assert_eq!(window_indices(-2, 1).len(), 7);
        assert_eq!(window_indices(1, 2).len(), 10);
    }

    #[test]
    fn weight_examples() {
        let cfg = SpaceConfig::deg1(0.5).unwrap();
        assert_eq!(cfg.weight(idx(0, 0)), 1.0);
        assert!((cfg.weight(idx(1, -1)) - 1.0f64.exp()).abs() < 1e-12);

        let fr = SpaceConfig::symmetric_fr(0.5).unwrap();
        let expected =
            (-0.5 * (GOLDEN_PLUS + 1.0).abs() + 0.5 * (GOLDEN_MINUS + 1.0).abs()).exp();
        assert!((fr.weight(idx(1, 1)) - expected).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(SpaceConfig::deg1(0.0).is_err());
        assert!(SpaceConfig::deg1(-1.0).is_err());
        assert!(SpaceConfig::degphi(0.5, 0.9).is_err());
        assert!(SpaceConfig::degphi(0.5, 1.0).is_ok());
    }

    proptest! {
        // deg₁ is symmetric; deg_φ is not for φ > 1 unless the two points
        // coincide under the swap.
        #[test]
        fn deg_symmetry(m in -100i64..=100, n in -100i64..=100) {
            prop_assert_eq!(deg1(idx(m, n)), deg1(idx(n, m)));
            let phi = 2.0;
            let a = degphi(idx(m, n), phi).unwrap();
            let b = degphi(idx(n, m), phi).unwrap();
            if m != n && m.saturating_mul(n) >= 0 && m.abs() != n.abs() {
                prop_assert_ne!(a, b);
            }
            if m == n {
                prop_assert_eq!(a, b);
            }
        }

        // Weights are invariant under simultaneous negation of the index.
        #[test]
        fn weight_negation_invariance(m in -80i64..=80, n in -80i64..=80) {
            for cfg in [
                SpaceConfig::deg1(0.3).unwrap(),
                SpaceConfig::degphi(0.3, 1.7).unwrap(),
                SpaceConfig::symmetric_fr(0.3).unwrap(),
            ] {
                prop_assert_eq!(cfg.weight(idx(m, n)), cfg.weight(idx(-m, -n)));
            }
        }

        // The symmetrised golden-ratio weights satisfy the swap hypothesis.
        #[test]
        fn symmetric_fr_swap(m in -80i64..=80, n in -80i64..=80) {
            let cfg = SpaceConfig::symmetric_fr(0.4).unwrap();
            prop_assert_eq!(cfg.weight(idx(m, n)), cfg.weight(idx(n, m)));
        }
    }
}
