//! Column action of the composition operators on the monomial basis, and
//! exact block / windowed matrix assembly.
//!
//! Each map sends the monomial `e_{m,n}` to a Blaschke power times a
//! monomial, so every operator column is supported on a single lattice ray
//! `(x₀ + σt, y)` with coefficients `α_{p,t}`:
//!
//! - `B_λ (z,w) = (b(z) z w, b(z) w)`: ray `(m + σt, m+n)`, `p = m+n`;
//! - `T_λ (z,w) = (b(z) w, z)`: ray `(n + σt, m)`, `p = m`;
//! - `B_{λ,K} (z,w) = (b^{K²+1} w^K, b^K w)`: ray `(σt, Km+n)`,
//!   `p = (K²+1)m + Kn`;
//! - `T_{λ,K} (z,w) = (b^K w, z)`: ray `(n + σt, m)`, `p = Km`;
//!
//! with `σ = sign(p)` and the convention `α_{-p,t} = conj(α_{p,t})`. When
//! `p = 0` the column is a single unit entry. `B_λ`, `T_λ` and `T_{λ,K}`
//! never decrease `deg₁` along their rays, which makes their matrices
//! block-triangular; `B_{λ,K}` with `K ≥ 1` genuinely does not have this
//! property on the mixed-sign cone (e.g. `K = 1`, source `(2,-3)`, ray entry
//! `t = 5`), so windowed products involving it are not attempted.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use crate::blaschke::{self, BlaschkeParam};
use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::lattice::{self, MonomialIndex, SpaceConfig, WeightFamily};

/// A torus map whose composition operator this crate realises.
///
/// `Compose` lists factors in composition order: `compose([F, G])` is the
/// map `F ∘ G` (G acts first on points), and its composition operator
/// applies `C_F` first, then `C_G`, per `C_{F∘G} = C_G ∘ C_F`.
#[derive(Debug, Clone, PartialEq)]
pub enum MapSpec {
    B { lambda: BlaschkeParam },
    T { lambda: BlaschkeParam },
    Bk { lambda: BlaschkeParam, k: u32 },
    Tk { lambda: BlaschkeParam, k: u32 },
    Compose(Vec<MapSpec>),
}

impl MapSpec {
    pub fn b(lambda: BlaschkeParam) -> Self {
        Self::B { lambda }
    }

    pub fn t(lambda: BlaschkeParam) -> Self {
        Self::T { lambda }
    }

    pub fn bk(lambda: BlaschkeParam, k: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidMapOrder { k });
        }
        Ok(Self::Bk { lambda, k })
    }

    pub fn tk(lambda: BlaschkeParam, k: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidMapOrder { k });
        }
        Ok(Self::Tk { lambda, k })
    }

    pub fn compose(factors: Vec<MapSpec>) -> Self {
        Self::Compose(factors)
    }

    /// Primitive factors in operator-application order (leftmost factor's
    /// operator acts first on functions).
    pub fn operator_sequence(&self) -> Vec<&MapSpec> {
        match self {
            Self::Compose(factors) => {
                factors.iter().flat_map(|f| f.operator_sequence()).collect()
            }
            prim => vec![prim],
        }
    }

    /// Whether every primitive factor increases `deg₁` column-wise; this is
    /// the hypothesis of the block-triangular machinery.
    pub fn increases_deg1(&self) -> bool {
        match self {
            Self::B { .. } | Self::T { .. } | Self::Tk { .. } => true,
            Self::Bk { .. } => false,
            Self::Compose(fs) => fs.iter().all(Self::increases_deg1),
        }
    }
}

/// Support of one operator column before materialisation.
enum ColumnAction {
    /// Single unit entry.
    Single { target: MonomialIndex },
    /// Entries `(x₀ + σt, y) ↦ α_{p,t}` for `t ≥ 0`, `σ = sign(p)`.
    Ray { lambda: BlaschkeParam, base: MonomialIndex, power: i64 },
}

fn sgn(v: i64) -> i64 {
    if v >= 0 {
        1
    } else {
        -1
    }
}

fn primitive_action(spec: &MapSpec, idx: MonomialIndex) -> ColumnAction {
    let (m, n) = (idx.m, idx.n);
    match *spec {
        MapSpec::B { lambda } => {
            let p = m + n;
            if p == 0 {
                ColumnAction::Single { target: MonomialIndex::new(m, 0) }
            } else {
                ColumnAction::Ray { lambda, base: MonomialIndex::new(m, p), power: p }
            }
        }
        MapSpec::T { lambda } => {
            if m == 0 {
                ColumnAction::Single { target: MonomialIndex::new(n, 0) }
            } else {
                ColumnAction::Ray { lambda, base: MonomialIndex::new(n, m), power: m }
            }
        }
        MapSpec::Bk { lambda, k } => {
            let k = k as i64;
            let p = (k * k + 1) * m + k * n;
            let y = k * m + n;
            if p == 0 {
                ColumnAction::Single { target: MonomialIndex::new(0, y) }
            } else {
                ColumnAction::Ray { lambda, base: MonomialIndex::new(0, y), power: p }
            }
        }
        MapSpec::Tk { lambda, k } => {
            if m == 0 {
                ColumnAction::Single { target: MonomialIndex::new(n, 0) }
            } else {
                ColumnAction::Ray {
                    lambda,
                    base: MonomialIndex::new(n, m),
                    power: k as i64 * m,
                }
            }
        }
        MapSpec::Compose(_) => unreachable!("primitive_action on composite spec"),
    }
}

/// The image of one basis vector: finitely many retained entries plus a
/// weighted bound on everything dropped.
#[derive(Debug, Clone)]
pub struct SparseColumn {
    pub source: MonomialIndex,
    /// Distinct targets in canonical index order.
    pub entries: Vec<(MonomialIndex, Complex64)>,
    /// Bound on the `cfg`-weighted norm of the truncated remainder.
    pub tail_weight: f64,
}

impl SparseColumn {
    pub fn coefficient(&self, target: MonomialIndex) -> Complex64 {
        self.entries
            .binary_search_by_key(&target, |&(t, _)| t)
            .map(|i| self.entries[i].1)
            .unwrap_or_else(|_| Complex64::new(0.0, 0.0))
    }

    /// `‖column‖ / ‖e_source‖` under `cfg`, with the tail folded in as an
    /// orthogonal remainder.
    pub fn weighted_ratio_sqr(&self, cfg: &SpaceConfig) -> f64 {
        let retained: f64 = self
            .entries
            .iter()
            .map(|&(t, c)| c.norm_sqr() * (2.0 * cfg.log_weight(t)).exp())
            .sum();
        let tail = self.tail_weight;
        (retained + tail * tail) * (-2.0 * cfg.log_weight(self.source)).exp()
    }
}

/// Weighted bound on the ray remainder beyond `order`: the weights along the
/// ray decay at least geometrically from a computable prefactor, and the
/// coefficient mass is controlled by the contraction factor, so
/// `‖remainder‖ ≤ P · sqrt(max(0, M^{|p|} - Σ_{t ≤ K} |α_t|² d^t))`.
fn ray_tail_weight(
    lambda: BlaschkeParam,
    base: MonomialIndex,
    power: i64,
    coeffs: &blaschke::BlaschkeCoefficients,
    cfg: &SpaceConfig,
) -> f64 {
    let a = cfg.a();
    let (a_eff, prefactor) = match cfg.family() {
        WeightFamily::Deg1 | WeightFamily::DegPhi => (a, cfg.weight(base)),
        WeightFamily::SymmetricFr => {
            let p = 0.5
                * a
                * (base.m.abs() as f64 + (2.0 + 5.0f64.sqrt()) * base.n.abs() as f64);
            (0.5 * a, p.exp())
        }
    };
    let bound = blaschke::contraction_factor(lambda, a_eff)
        .expect("a validated by SpaceConfig")
        .powi(power.unsigned_abs().min(i32::MAX as u64) as i32);
    let damp = (-2.0 * a_eff).exp();
    let mut weight = 1.0;
    let mut partial = 0.0;
    for c in coeffs.coeffs.iter() {
        partial += c.norm_sqr() * weight;
        weight *= damp;
    }
    prefactor * (bound - partial).max(0.0).sqrt()
}

fn materialize(action: ColumnAction, source: MonomialIndex, order: usize, cfg: &SpaceConfig) -> SparseColumn {
    match action {
        ColumnAction::Single { target } => SparseColumn {
            source,
            entries: vec![(target, Complex64::new(1.0, 0.0))],
            tail_weight: 0.0,
        },
        ColumnAction::Ray { lambda, base, power } => {
            let coeffs = blaschke::coefficients(lambda, power.unsigned_abs() as u32, order);
            let step = sgn(power);
            let mut entries: Vec<(MonomialIndex, Complex64)> = (0..=order)
                .filter_map(|t| {
                    let c = blaschke::signed_coeff(&coeffs, power, t);
                    if c == Complex64::new(0.0, 0.0) {
                        return None;
                    }
                    Some((MonomialIndex::new(base.m + step * t as i64, base.n), c))
                })
                .collect();
            entries.sort_unstable_by_key(|&(t, _)| t);
            let tail_weight = ray_tail_weight(lambda, base, power, &coeffs, cfg);
            SparseColumn { source, entries, tail_weight }
        }
    }
}

/// `C_{B_λ} e_{m,n}` truncated at `order` ray terms.
pub fn apply_b(
    lambda: BlaschkeParam,
    idx: MonomialIndex,
    order: usize,
    cfg: &SpaceConfig,
) -> SparseColumn {
    materialize(primitive_action(&MapSpec::b(lambda), idx), idx, order, cfg)
}

/// `C_{T_λ} e_{m,n}` truncated at `order` ray terms.
pub fn apply_t(
    lambda: BlaschkeParam,
    idx: MonomialIndex,
    order: usize,
    cfg: &SpaceConfig,
) -> SparseColumn {
    materialize(primitive_action(&MapSpec::t(lambda), idx), idx, order, cfg)
}

/// `C_{B_{λ,K}} e_{m,n}` truncated at `order` ray terms; `K ≥ 1`.
pub fn apply_bk(
    lambda: BlaschkeParam,
    k: u32,
    idx: MonomialIndex,
    order: usize,
    cfg: &SpaceConfig,
) -> Result<SparseColumn> {
    let spec = MapSpec::bk(lambda, k)?;
    Ok(materialize(primitive_action(&spec, idx), idx, order, cfg))
}

/// `C_{T_{λ,K}} e_{m,n}` truncated at `order` ray terms; `K ≥ 1`.
pub fn apply_tk(
    lambda: BlaschkeParam,
    k: u32,
    idx: MonomialIndex,
    order: usize,
    cfg: &SpaceConfig,
) -> Result<SparseColumn> {
    let spec = MapSpec::tk(lambda, k)?;
    Ok(materialize(primitive_action(&spec, idx), idx, order, cfg))
}

/// Truncation policy for composite column expansion.
#[derive(Debug, Clone, Copy)]
pub struct Truncation {
    /// Ray terms retained per primitive column.
    pub order: usize,
    /// Entries with weighted magnitude below this are dropped into the tail.
    pub drop_tol: f64,
    /// Entries with `|m| + |n|` beyond this are dropped into the tail.
    pub max_radius: i64,
}

impl Truncation {
    pub fn new(order: usize, drop_tol: f64, max_radius: i64) -> Self {
        Self { order, drop_tol, max_radius }
    }

    /// No radius cap, no magnitude drops.
    pub fn exact(order: usize) -> Self {
        Self { order, drop_tol: 0.0, max_radius: i64::MAX }
    }
}

#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: Complex64,
    comp: Complex64,
}

impl Kahan {
    fn add(&mut self, v: Complex64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Apply the (possibly composite) operator to one basis vector, expanding
/// factor by factor in operator order, merging duplicate targets with
/// compensated summation, and accumulating every drop into `tail_weight`.
///
/// An empty composition is the identity.
pub fn apply_map(
    spec: &MapSpec,
    idx: MonomialIndex,
    trunc: Truncation,
    cfg: &SpaceConfig,
) -> SparseColumn {
    let mut state = BTreeMap::new();
    state.insert(idx, Complex64::new(1.0, 0.0));
    let mut tail = 0.0;

    for factor in spec.operator_sequence() {
        let mut next: BTreeMap<MonomialIndex, Kahan> = BTreeMap::new();
        for (&src, &coef) in &state {
            let column = materialize(primitive_action(factor, src), src, trunc.order, cfg);
            tail += coef.norm() * column.tail_weight;
            for &(target, alpha) in &column.entries {
                let v = coef * alpha;
                if v == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let weighted = v.norm() * cfg.weight(target);
                if target.radius() > trunc.max_radius || weighted < trunc.drop_tol {
                    tail += weighted;
                    continue;
                }
                next.entry(target).or_default().add(v);
            }
        }
        state = next.into_iter().map(|(k, v)| (k, v.sum)).collect();
    }

    SparseColumn {
        source: idx,
        entries: state.into_iter().collect(),
        tail_weight: tail,
    }
}

/// The finite matrix `Π_{D_k} ∘ C ∘ Π_{D_k}` on the canonical block basis.
#[derive(Debug, Clone)]
pub struct BlockMatrix {
    pub k: i64,
    pub indices: Vec<MonomialIndex>,
    pub data: CMatrix,
}

impl BlockMatrix {
    pub fn dim(&self) -> usize {
        self.indices.len()
    }
}

/// Exact block entries of a primitive column: iterate the finite set of ray
/// indices whose targets can have `|x| + |y| = |k|` and keep exact degree
/// matches. No truncation order is involved; the block geometry bounds the
/// scan even for rays along which `deg₁` is not monotone.
fn primitive_entries_in_levels(
    spec: &MapSpec,
    src: MonomialIndex,
    k_min: i64,
    k_max: i64,
) -> Vec<(MonomialIndex, Complex64)> {
    let level_of = |t: MonomialIndex| lattice::deg1(t);
    match primitive_action(spec, src) {
        ColumnAction::Single { target } => {
            let k = level_of(target);
            if k >= k_min && k <= k_max {
                vec![(target, Complex64::new(1.0, 0.0))]
            } else {
                Vec::new()
            }
        }
        ColumnAction::Ray { lambda, base, power } => {
            let max_abs = k_min.abs().max(k_max.abs());
            if base.n.abs() > max_abs {
                return Vec::new();
            }
            let step = sgn(power);
            let t_bound = (max_abs - base.n.abs() + base.m.abs()).max(0) as usize;
            let coeffs =
                blaschke::coefficients(lambda, power.unsigned_abs() as u32, t_bound);
            let mut out = Vec::new();
            for t in 0..=t_bound {
                let target = MonomialIndex::new(base.m + step * t as i64, base.n);
                let k = level_of(target);
                if k >= k_min && k <= k_max {
                    let c = blaschke::signed_coeff(&coeffs, power, t);
                    if c != Complex64::new(0.0, 0.0) {
                        out.push((target, c));
                    }
                }
            }
            out
        }
    }
}

/// `Π_{D_k} ∘ C ∘ Π_{D_k}` exactly. For compositions this is the product of
/// the factors' blocks in operator order, which is exact when every factor
/// increases `deg₁`.
pub fn block_matrix(spec: &MapSpec, k: i64) -> Result<BlockMatrix> {
    let block = lattice::block_indices(k);
    if block.is_empty() {
        return Err(Error::EmptyBlock { k });
    }
    match spec {
        MapSpec::Compose(_) => {
            if !spec.increases_deg1() {
                return Err(Error::UnsupportedSpec);
            }
            let dim = block.dim();
            let mut acc = CMatrix::identity(dim);
            for factor in spec.operator_sequence() {
                acc = block_matrix(factor, k)?.data.mul(&acc);
            }
            Ok(BlockMatrix { k, indices: block.indices, data: acc })
        }
        _ => {
            let dim = block.dim();
            let row_of: HashMap<MonomialIndex, usize> =
                block.indices.iter().copied().zip(0..).collect();
            let mut data = CMatrix::zeros(dim);
            for (j, &src) in block.indices.iter().enumerate() {
                for (target, c) in primitive_entries_in_levels(spec, src, k, k) {
                    let i = row_of[&target];
                    data[(i, j)] += c;
                }
            }
            Ok(BlockMatrix { k, indices: block.indices, data })
        }
    }
}

/// `Π_W ∘ C ∘ Π_W` on the window `W = ⊕_{k_min ≤ k ≤ k_max} D_k` in
/// block-major order. Exact: only finitely many ray terms can land in the
/// window. Compositions require every factor to increase `deg₁` (then the
/// windowed product is exact as well).
pub fn windowed_matrix(spec: &MapSpec, k_min: i64, k_max: i64) -> Result<CMatrix> {
    let indices = lattice::window_indices(k_min, k_max);
    if indices.is_empty() {
        return Err(Error::EmptyWindow { k_min, k_max });
    }
    match spec {
        MapSpec::Compose(_) => {
            if !spec.increases_deg1() {
                return Err(Error::UnsupportedSpec);
            }
            let mut acc = CMatrix::identity(indices.len());
            for factor in spec.operator_sequence() {
                acc = windowed_matrix(factor, k_min, k_max)?.mul(&acc);
            }
            Ok(acc)
        }
        _ => {
            let row_of: HashMap<MonomialIndex, usize> =
                indices.iter().copied().zip(0..).collect();
            let mut data = CMatrix::zeros(indices.len());
            for (j, &src) in indices.iter().enumerate() {
                for (target, c) in primitive_entries_in_levels(spec, src, k_min, k_max) {
                    let i = row_of[&target];
                    data[(i, j)] += c;
                }
            }
            Ok(data)
        }
    }
}

/// Window basis for a dense matrix produced by [`windowed_matrix`].
pub fn window_basis(k_min: i64, k_max: i64) -> Vec<MonomialIndex> {
    lattice::window_indices(k_min, k_max)
}
