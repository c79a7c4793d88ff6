//! Modules over the constructed algebras: twisting, induced modules over
//! skew group algebras, Hom-space and endomorphism oracles, minimal
//! projective presentations and the Auslander-Reiten translation, reflection
//! functors, rank vectors of locally free modules, and the equivalence that
//! transports induced modules to the Cartan-triple algebra.

mod psi;
mod reflect;
mod tau;

pub use psi::{FoldingEquivalence, PsiError, PsiModule};
pub use reflect::{indecomposable_for_root, reflect_minus, reflect_plus, QuiverRep, ReflectError};
pub use tau::{dual, min_projective_presentation, tau, tau_minus, transpose, Presentation};

use crate::algkit::{lin_single, AlgebraAction, Fp, FpMat, HAlgebra, Lin, RowSpace, StructAlgebra};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModError {
    #[error("not a module: {0}")]
    NotAModule(String),
    #[error("modules live over different algebras or have mismatched shapes")]
    Mismatch,
    #[error("search space too large: {0} exceeds the cap")]
    TooLarge(u128),
}

/// A finite-dimensional left module over a structure-constant algebra: one
/// action matrix per algebra basis element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgModule {
    pub dim: usize,
    pub action: Vec<FpMat>,
}

impl AlgModule {
    /// Validates the action: the unit acts as the identity and the action is
    /// multiplicative on the whole table.
    pub fn new(alg: &StructAlgebra, action: Vec<FpMat>) -> Result<AlgModule, ModError> {
        let dim = action.first().map_or(0, |m| m.rows);
        if action.len() != alg.dim {
            return Err(ModError::NotAModule("wrong number of action matrices".into()));
        }
        for m in &action {
            if m.rows != dim || m.cols != dim {
                return Err(ModError::NotAModule("action matrices are not square".into()));
            }
        }
        let module = AlgModule { dim, action };
        let one = module.act_lin(alg, &alg.unit);
        if one != FpMat::identity(alg.field, dim) {
            return Err(ModError::NotAModule("unit does not act as the identity".into()));
        }
        for a in 0..alg.dim {
            for b in 0..alg.dim {
                let lhs = module.action[a].matmul(&module.action[b]);
                let rhs = module.act_lin(alg, alg.mul_basis(a, b));
                if lhs != rhs {
                    return Err(ModError::NotAModule(format!(
                        "action is not multiplicative at ({a},{b})"
                    )));
                }
            }
        }
        Ok(module)
    }

    pub fn zero(alg: &StructAlgebra) -> AlgModule {
        AlgModule { dim: 0, action: vec![FpMat::zeros(alg.field, 0, 0); alg.dim] }
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// The action matrix of a linear combination of basis elements.
    pub fn act_lin(&self, alg: &StructAlgebra, x: &Lin) -> FpMat {
        let mut out = FpMat::zeros(alg.field, self.dim, self.dim);
        for &(b, c) in x {
            out = out.add(&self.action[b].scale(c));
        }
        out
    }

    /// Restriction of the action to an invariant subspace spanned by the
    /// columns of `basis`.
    pub fn restrict(&self, alg: &StructAlgebra, basis: &FpMat) -> Result<AlgModule, ModError> {
        let action = self
            .action
            .iter()
            .map(|m| {
                basis
                    .solve(&m.matmul(basis))
                    .ok_or_else(|| ModError::NotAModule("subspace is not invariant".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        AlgModule::new(alg, action)
    }

    /// Quotient by an invariant subspace spanned by the columns of `basis`.
    pub fn quotient(&self, alg: &StructAlgebra, basis: &FpMat) -> Result<AlgModule, ModError> {
        let f = alg.field;
        let n = self.dim;
        // Complete the subspace basis to a full basis by standard vectors.
        let mut space = RowSpace::new(f, n);
        let mut cols: Vec<Vec<u64>> = Vec::new();
        for j in 0..basis.cols {
            let v = basis.col(j);
            if space.insert(&v) {
                cols.push(v);
            }
        }
        let k = cols.len();
        for j in 0..n {
            let mut v = vec![0u64; n];
            v[j] = 1;
            if space.insert(&v) {
                cols.push(v);
            }
        }
        let mut p = FpMat::zeros(f, n, n);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                p.set(i, j, col[i]);
            }
        }
        let pinv = p.inverse().expect("completed basis is invertible");
        let q = n - k;
        let action = self
            .action
            .iter()
            .map(|m| {
                let t = pinv.matmul(&m.matmul(&p));
                let mut out = FpMat::zeros(f, q, q);
                for i in 0..q {
                    for j in 0..q {
                        out.set(i, j, t.get(k + i, k + j));
                    }
                }
                out
            })
            .collect();
        AlgModule::new(alg, action)
    }

    /// Dimension of `e·M` for a basis idempotent.
    pub fn idem_rank(&self, idem: usize) -> usize {
        self.action[idem].rank()
    }
}

/// Per-vertex dimensions `dim e_v·M` of a module over a presented algebra.
pub fn dim_vector(pa: &crate::algkit::PresentedAlgebra, m: &AlgModule) -> Vec<usize> {
    pa.vertex_idem.iter().map(|&e| m.idem_rank(e)).collect()
}

/// The twisted module: the action is precomposed with the algebra
/// automorphism attached to `g`.
pub fn twist(alg: &StructAlgebra, act: &AlgebraAction, m: &AlgModule, g: usize) -> AlgModule {
    let action = (0..alg.dim).map(|b| m.action[act.apply(g, b)].clone()).collect();
    AlgModule { dim: m.dim, action }
}

/// The induced module `M # G` over the skew group algebra: underlying space
/// `M ⊗ KG` with `(a#g)·(m#h) = (gh)^{-1}(a)·m # gh`. Basis `(i, h)` at
/// index `i·|G| + h`.
pub fn induce(
    alg: &StructAlgebra,
    act: &AlgebraAction,
    skew: &StructAlgebra,
    m: &AlgModule,
) -> AlgModule {
    let ng = act.group.order();
    let dim = m.dim * ng;
    let idx = |i: usize, h: usize| i * ng + h;
    let action: Vec<FpMat> = (0..skew.dim)
        .map(|bg| {
            let (b, g) = (bg / ng, bg % ng);
            let mut out = FpMat::zeros(alg.field, dim, dim);
            for h in 0..ng {
                let gh = act.group.mul(g, h);
                let moved = act.apply(act.group.inv(gh), b);
                for i in 0..m.dim {
                    for r in 0..m.dim {
                        let v = m.action[moved].get(r, i);
                        if v != 0 {
                            out.set(idx(r, gh), idx(i, h), v);
                        }
                    }
                }
            }
            out
        })
        .collect();
    let module = AlgModule { dim, action };
    debug_assert!(AlgModule::new(skew, module.action.clone()).is_ok());
    module
}

/// Verifies the canonical identification of `M # G` with the tensor
/// induction `(A#G) ⊗_A M`: the evaluation map kills the tensor relations
/// and has full rank, and the quotient dimension matches.
pub fn verify_induced_tensor_iso(
    alg: &StructAlgebra,
    act: &AlgebraAction,
    skew: &StructAlgebra,
    m: &AlgModule,
) -> bool {
    let f = alg.field;
    let ng = act.group.order();
    let induced = induce(alg, act, skew, m);
    let tdim = skew.dim * m.dim;
    let tidx = |x: usize, v: usize| x * m.dim + v;
    // Evaluation x ⊗ v -> x · (v # 1).
    let mut eval = FpMat::zeros(f, induced.dim, tdim);
    for x in 0..skew.dim {
        for v in 0..m.dim {
            let col = induced.action[x].col(v * ng);
            for (r, &c) in col.iter().enumerate() {
                eval.set(r, tidx(x, v), c);
            }
        }
    }
    if eval.rank() != induced.dim {
        return false;
    }
    // Relations (x·(a#1)) ⊗ v - x ⊗ (a·v).
    let mut rel = RowSpace::new(f, tdim);
    for x in 0..skew.dim {
        for a in 0..alg.dim {
            let xa = skew.mul_lin(&lin_single(x), &lin_single(a * ng));
            for v in 0..m.dim {
                let mut vec = vec![0u64; tdim];
                for &(y, c) in &xa {
                    vec[tidx(y, v)] = f.add(vec[tidx(y, v)], c);
                }
                for r in 0..m.dim {
                    let c = m.action[a].get(r, v);
                    if c != 0 {
                        vec[tidx(x, r)] = f.sub(vec[tidx(x, r)], c);
                    }
                }
                // Every relation must die under evaluation.
                let img = eval.mul_vec(&vec);
                if img.iter().any(|&z| z != 0) {
                    return false;
                }
                rel.insert(&vec);
            }
        }
    }
    tdim - rel.dim() == induced.dim
}

/// A basis of the space of module homomorphisms `M -> N`, as matrices.
pub fn hom_space(alg: &StructAlgebra, m: &AlgModule, n: &AlgModule) -> Vec<FpMat> {
    let f = alg.field;
    let unknowns = n.dim * m.dim;
    if unknowns == 0 {
        return vec![];
    }
    let mut rows = Vec::new();
    for a in 0..alg.dim {
        // f·rho_M(a) = rho_N(a)·f, one linear constraint per entry.
        for r in 0..n.dim {
            for c in 0..m.dim {
                let mut row = vec![0u64; unknowns];
                for k in 0..m.dim {
                    let v = m.action[a].get(k, c);
                    if v != 0 {
                        row[r * m.dim + k] = f.add(row[r * m.dim + k], v);
                    }
                }
                for k in 0..n.dim {
                    let v = n.action[a].get(r, k);
                    if v != 0 {
                        row[k * m.dim + c] = f.sub(row[k * m.dim + c], v);
                    }
                }
                rows.push(row);
            }
        }
    }
    let mat = FpMat::from_rows(f, rows);
    mat.kernel_basis()
        .into_iter()
        .map(|v| {
            let mut out = FpMat::zeros(f, n.dim, m.dim);
            for r in 0..n.dim {
                for c in 0..m.dim {
                    out.set(r, c, v[r * m.dim + c]);
                }
            }
            out
        })
        .collect()
}

/// Outcome of an isomorphism search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoVerdict {
    Yes,
    No,
    /// The search space exceeded the brute-force cap without a witness.
    Unknown,
}

/// Decides isomorphy by exhaustive search over the Hom space when
/// `p^dim Hom` is at most `cap`, falling back to seeded sampling.
pub fn is_isomorphic(alg: &StructAlgebra, m: &AlgModule, n: &AlgModule, cap: u128) -> IsoVerdict {
    if m.dim != n.dim {
        return IsoVerdict::No;
    }
    if m.dim == 0 {
        return IsoVerdict::Yes;
    }
    let basis = hom_space(alg, m, n);
    if basis.is_empty() {
        return IsoVerdict::No;
    }
    let p = alg.field.p as u128;
    let k = basis.len() as u32;
    let space = p.checked_pow(k);
    match space {
        Some(total) if total <= cap => {
            let mut coeffs = vec![0u64; basis.len()];
            loop {
                let mut cand = FpMat::zeros(alg.field, n.dim, m.dim);
                for (c, b) in coeffs.iter().zip(basis.iter()) {
                    if *c != 0 {
                        cand = cand.add(&b.scale(*c));
                    }
                }
                if cand.inverse().is_some() {
                    return IsoVerdict::Yes;
                }
                let mut i = 0;
                loop {
                    if i == coeffs.len() {
                        return IsoVerdict::No;
                    }
                    coeffs[i] += 1;
                    if coeffs[i] < alg.field.p {
                        break;
                    }
                    coeffs[i] = 0;
                    i += 1;
                }
            }
        }
        _ => {
            // Deterministic sampling; a miss is inconclusive.
            let mut state = 0x9e3779b97f4a7c15u64;
            for _ in 0..4096 {
                let mut cand = FpMat::zeros(alg.field, n.dim, m.dim);
                for b in &basis {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let c = (state >> 33) % alg.field.p;
                    if c != 0 {
                        cand = cand.add(&b.scale(c));
                    }
                }
                if cand.inverse().is_some() {
                    return IsoVerdict::Yes;
                }
            }
            IsoVerdict::Unknown
        }
    }
}

/// Brute-force idempotent search over the endomorphism algebra: local iff
/// the only idempotents are 0 and the identity.
pub fn end_is_local(alg: &StructAlgebra, m: &AlgModule, cap: u128) -> Result<bool, ModError> {
    if m.dim == 0 {
        return Ok(false);
    }
    let basis = hom_space(alg, m, m);
    let p = alg.field.p as u128;
    let k = basis.len() as u32;
    let total = p.checked_pow(k).ok_or(ModError::TooLarge(u128::MAX))?;
    if total > cap {
        return Err(ModError::TooLarge(total));
    }
    let id = FpMat::identity(alg.field, m.dim);
    let mut coeffs = vec![0u64; basis.len()];
    loop {
        let mut cand = FpMat::zeros(alg.field, m.dim, m.dim);
        for (c, b) in coeffs.iter().zip(basis.iter()) {
            if *c != 0 {
                cand = cand.add(&b.scale(*c));
            }
        }
        if cand.matmul(&cand) == cand && !cand.is_zero() && cand != id {
            return Ok(false);
        }
        let mut i = 0;
        loop {
            if i == coeffs.len() {
                return Ok(true);
            }
            coeffs[i] += 1;
            if coeffs[i] < alg.field.p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

/// A rank vector over the orbit lattice, or the freeness failure witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankOutcome {
    Free(Vec<usize>),
    NotLocallyFree { vertex: usize, stage: usize },
}

impl RankOutcome {
    pub fn rank(&self) -> Option<&Vec<usize>> {
        match self {
            RankOutcome::Free(r) => Some(r),
            RankOutcome::NotLocallyFree { .. } => None,
        }
    }
}

/// Tests each `e_i·Y` for freeness over the truncated polynomial ring on the
/// loop by its nilpotent rank profile, returning the rank vector on success.
pub fn rank_vector(h: &HAlgebra, y: &AlgModule) -> RankOutcome {
    let alg = &h.pa.alg;
    let f = alg.field;
    let mut ranks = Vec::with_capacity(h.triple.n);
    for v in 0..h.triple.n {
        let c = h.triple.d[v] as usize;
        let e = h.pa.vertex_idem[v];
        let dv = y.idem_rank(e);
        if c == 1 {
            ranks.push(dv);
            continue;
        }
        if dv % c != 0 {
            return RankOutcome::NotLocallyFree { vertex: v, stage: 0 };
        }
        let r = dv / c;
        let eps = h.eps_index[v].expect("loop exists when the symmetrizer entry exceeds 1");
        // dim eps^k (e_v Y) must be (c - k)·r for all k.
        let ev = y.action[e].clone();
        let mut power = ev;
        for k in 0..=c {
            let rank = power.rank();
            if rank != (c - k) * r {
                return RankOutcome::NotLocallyFree { vertex: v, stage: k };
            }
            power = y.action[eps].matmul(&power);
        }
        let _ = f;
        ranks.push(r);
    }
    RankOutcome::Free(ranks)
}

/// Report of the iterated translation test: local freeness of every
/// translate in both directions until the module dies or the depth cap hits.
#[derive(Debug, Clone)]
pub struct TauLocallyFreeReport {
    pub locally_free: bool,
    pub rank: Option<Vec<usize>>,
    /// First failure: direction (+1 forward, -1 backward), iteration depth,
    /// and the witness vertex/stage.
    pub failure: Option<(i32, usize, usize, usize)>,
    pub forward_terminated: bool,
    pub backward_terminated: bool,
}

impl TauLocallyFreeReport {
    pub fn tau_locally_free(&self) -> bool {
        self.locally_free
            && self.failure.is_none()
            && self.forward_terminated
            && self.backward_terminated
    }
}

/// Iterates the translation in both directions, checking local freeness of
/// every stage, up to `depth` steps each way.
pub fn tau_locally_free(h: &HAlgebra, y: &AlgModule, depth: usize) -> TauLocallyFreeReport {
    let first = rank_vector(h, y);
    let (locally_free, rank) = match &first {
        RankOutcome::Free(r) => (true, Some(r.clone())),
        RankOutcome::NotLocallyFree { .. } => (false, None),
    };
    let mut failure = match first {
        RankOutcome::NotLocallyFree { vertex, stage } => Some((0, 0, vertex, stage)),
        _ => None,
    };
    let mut forward_terminated = false;
    let mut current = y.clone();
    if failure.is_none() {
        for k in 1..=depth {
            current = tau(&h.pa, &current);
            if current.is_zero() {
                forward_terminated = true;
                break;
            }
            if let RankOutcome::NotLocallyFree { vertex, stage } = rank_vector(h, &current) {
                failure = Some((1, k, vertex, stage));
                break;
            }
        }
    }
    let mut backward_terminated = false;
    let mut current = y.clone();
    if failure.is_none() {
        for k in 1..=depth {
            current = tau_minus(&h.pa, &current);
            if current.is_zero() {
                backward_terminated = true;
                break;
            }
            if let RankOutcome::NotLocallyFree { vertex, stage } = rank_vector(h, &current) {
                failure = Some((-1, k, vertex, stage));
                break;
            }
        }
    }
    TauLocallyFreeReport { locally_free, rank, failure, forward_terminated, backward_terminated }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algkit::{algebra_h, path_algebra, path_algebra_action, skew_group_algebra};
    use crate::cartan::CartanTriple;
    use crate::quiver::a3_with_swap;

    fn f2() -> Fp {
        Fp::new(2)
    }

    fn simple_at(pa: &crate::algkit::PresentedAlgebra, v: usize) -> AlgModule {
        let f = pa.alg.field;
        let action = (0..pa.alg.dim)
            .map(|b| {
                if b == pa.vertex_idem[v] {
                    FpMat::identity(f, 1)
                } else {
                    FpMat::zeros(f, 1, 1)
                }
            })
            .collect();
        AlgModule::new(&pa.alg, action).unwrap()
    }

    #[test]
    fn twist_by_identity_is_equal() {
        let (q, act) = a3_with_swap();
        let pa = path_algebra(&q, f2());
        let aact = path_algebra_action(&pa, &act).unwrap();
        let s2 = simple_at(&pa.pa, 1);
        assert_eq!(twist(&pa.pa.alg, &aact, &s2, 0), s2);
    }

    #[test]
    fn twist_of_s2_is_s3() {
        let (q, act) = a3_with_swap();
        let pa = path_algebra(&q, f2());
        let aact = path_algebra_action(&pa, &act).unwrap();
        let s2 = simple_at(&pa.pa, 1);
        let s3 = simple_at(&pa.pa, 2);
        assert_eq!(twist(&pa.pa.alg, &aact, &s2, 1), s3);
    }

    #[test]
    fn twist_composes_through_the_group() {
        let (q, act) = a3_with_swap();
        let pa = path_algebra(&q, f2());
        let aact = path_algebra_action(&pa, &act).unwrap();
        let s2 = simple_at(&pa.pa, 1);
        let double = twist(&pa.pa.alg, &aact, &twist(&pa.pa.alg, &aact, &s2, 1), 1);
        assert_eq!(double, twist(&pa.pa.alg, &aact, &s2, 0));
    }

    #[test]
    fn induce_simple_doubles_dimension() {
        let (q, act) = a3_with_swap();
        let pa = path_algebra(&q, f2());
        let aact = path_algebra_action(&pa, &act).unwrap();
        let skew = skew_group_algebra(&pa.pa.alg, &aact).unwrap();
        let s1 = simple_at(&pa.pa, 0);
        let ind = induce(&pa.pa.alg, &aact, &skew, &s1);
        assert_eq!(ind.dim, 2);
        assert!(AlgModule::new(&skew, ind.action.clone()).is_ok());
        assert!(verify_induced_tensor_iso(&pa.pa.alg, &aact, &skew, &s1));
    }

    #[test]
    fn induce_over_trivial_group() {
        let (q, _) = a3_with_swap();
        let pa = path_algebra(&q, f2());
        let aact = AlgebraAction::new(
            &pa.pa.alg,
            crate::fingroup::FinGroup::trivial(),
            vec![(0..pa.pa.alg.dim).collect()],
        )
        .unwrap();
        let skew = skew_group_algebra(&pa.pa.alg, &aact).unwrap();
        let s1 = simple_at(&pa.pa, 0);
        let ind = induce(&pa.pa.alg, &aact, &skew, &s1);
        assert_eq!(ind.dim, 1);
        assert!(verify_induced_tensor_iso(&pa.pa.alg, &aact, &skew, &s1));
    }

    #[test]
    fn hom_and_end_of_simples() {
        let (q, _) = a3_with_swap();
        let pa = path_algebra(&q, f2());
        let s1 = simple_at(&pa.pa, 0);
        let s2 = simple_at(&pa.pa, 1);
        assert_eq!(hom_space(&pa.pa.alg, &s1, &s1).len(), 1);
        assert!(hom_space(&pa.pa.alg, &s1, &s2).is_empty());
        assert!(end_is_local(&pa.pa.alg, &s1, 1 << 20).unwrap());
        assert_eq!(is_isomorphic(&pa.pa.alg, &s1, &s2, 1 << 20), IsoVerdict::No);
        assert_eq!(is_isomorphic(&pa.pa.alg, &s1, &s1, 1 << 20), IsoVerdict::Yes);
    }

    #[test]
    fn end_of_induced_simple_is_local_dim_two() {
        let (q, act) = a3_with_swap();
        let pa = path_algebra(&q, f2());
        let aact = path_algebra_action(&pa, &act).unwrap();
        let skew = skew_group_algebra(&pa.pa.alg, &aact).unwrap();
        let s1 = simple_at(&pa.pa, 0);
        let ind = induce(&pa.pa.alg, &aact, &skew, &s1);
        let end = hom_space(&skew, &ind, &ind);
        assert_eq!(end.len(), 2);
        assert!(end_is_local(&skew, &ind, 1 << 20).unwrap());
        // Graded decomposition of the endomorphism algebra.
        let twisted = twist(&pa.pa.alg, &aact, &s1, 1);
        let sum: usize = (0..2)
            .map(|g| {
                let tg = if g == 0 { s1.clone() } else { twisted.clone() };
                hom_space(&pa.pa.alg, &s1, &tg).len()
            })
            .sum();
        assert_eq!(end.len(), sum);
    }

    #[test]
    fn induced_modules_of_twisted_simples_agree() {
        let (q, act) = a3_with_swap();
        let pa = path_algebra(&q, f2());
        let aact = path_algebra_action(&pa, &act).unwrap();
        let skew = skew_group_algebra(&pa.pa.alg, &aact).unwrap();
        let s2 = simple_at(&pa.pa, 1);
        let s3 = simple_at(&pa.pa, 2);
        let i2 = induce(&pa.pa.alg, &aact, &skew, &s2);
        let i3 = induce(&pa.pa.alg, &aact, &skew, &s3);
        assert_eq!(is_isomorphic(&skew, &i2, &i3, 1 << 20), IsoVerdict::Yes);
        let s1 = simple_at(&pa.pa, 0);
        let i1 = induce(&pa.pa.alg, &aact, &skew, &s1);
        assert_eq!(is_isomorphic(&skew, &i1, &i2, 1 << 20), IsoVerdict::No);
    }

    #[test]
    fn rank_vector_of_jordan_block_module() {
        // The module with a size-2 loop block at the thick vertex.
        let h = algebra_h(&CartanTriple::b2(), f2()).unwrap();
        let alg = &h.pa.alg;
        let f = alg.field;
        // Basis y1, y3 at vertex 1 with eps1: y1 -> y3.
        let mut action = vec![FpMat::zeros(f, 2, 2); alg.dim];
        action[h.pa.vertex_idem[0]] = FpMat::identity(f, 2);
        let mut eps = FpMat::zeros(f, 2, 2);
        eps.set(1, 0, 1);
        action[h.eps_index[0].unwrap()] = eps;
        let y = AlgModule::new(alg, action).unwrap();
        assert_eq!(rank_vector(&h, &y), RankOutcome::Free(vec![1, 0]));
    }

    #[test]
    fn rank_vector_rejects_split_loop() {
        // Two-dimensional space at the thick vertex with eps acting as zero:
        // not free over the truncated polynomial ring.
        let h = algebra_h(&CartanTriple::b2(), f2()).unwrap();
        let alg = &h.pa.alg;
        let f = alg.field;
        let mut action = vec![FpMat::zeros(f, 2, 2); alg.dim];
        action[h.pa.vertex_idem[0]] = FpMat::identity(f, 2);
        let y = AlgModule::new(alg, action).unwrap();
        assert!(matches!(rank_vector(&h, &y), RankOutcome::NotLocallyFree { vertex: 0, .. }));
    }

    #[test]
    fn zero_module_has_zero_rank() {
        let h = algebra_h(&CartanTriple::b2(), f2()).unwrap();
        let y = AlgModule::zero(&h.pa.alg);
        assert_eq!(rank_vector(&h, &y), RankOutcome::Free(vec![0, 0]));
    }
}
