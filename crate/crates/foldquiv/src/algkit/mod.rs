//! Finite-dimensional algebras over prime fields as structure-constant
//! tables: category algebras, path algebras, skew group algebras, the bound
//! quiver algebra attached to a Cartan triple, the identification of the
//! latter with the category algebra of the Cartan-type category, and the
//! radical computations used by the module theory.

mod fp;

pub use fp::{is_prime, Fp, FpMat, RowSpace};

use crate::cartan::{cartan_type_ei_quiver, CartanEIQuiver, CartanTriple};
use crate::eicat::{build_free_ei_category, EICategory, FreeEICat};
use crate::fingroup::FinGroup;
use crate::quiver::{enumerate_paths, gcd, Path, Quiver, QuiverAction, VertexSel};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgError {
    #[error("not an associative unital algebra: {0}")]
    NotAnAlgebra(String),
    #[error("invalid algebra action: {0}")]
    ActionInvalid(String),
    #[error("precondition violated: {0}")]
    PrecondViolated(String),
    #[error("the constructed map is not an isomorphism: {0}")]
    NotIso(String),
    #[error("presentation is not admissible: {0}")]
    NotAdmissible(String),
    #[error(transparent)]
    Cartan(#[from] crate::cartan::CartanError),
}

/// A sorted sparse linear combination of basis elements.
pub type Lin = Vec<(usize, u64)>;

pub fn lin_single(i: usize) -> Lin {
    vec![(i, 1)]
}

pub fn lin_normalize(field: Fp, mut terms: Vec<(usize, u64)>) -> Lin {
    terms.sort_by_key(|&(i, _)| i);
    let mut out: Lin = Vec::with_capacity(terms.len());
    for (i, c) in terms {
        let c = c % field.p;
        match out.last_mut() {
            Some((j, acc)) if *j == i => *acc = field.add(*acc, c),
            _ => out.push((i, c)),
        }
    }
    out.retain(|&(_, c)| c != 0);
    out
}

pub fn lin_add(field: Fp, a: &Lin, b: &Lin) -> Lin {
    let mut t = a.clone();
    t.extend_from_slice(b);
    lin_normalize(field, t)
}

pub fn lin_scale(field: Fp, a: &Lin, s: u64) -> Lin {
    lin_normalize(field, a.iter().map(|&(i, c)| (i, field.mul(c, s))).collect())
}

pub fn lin_to_vec(field: Fp, a: &Lin, dim: usize) -> Vec<u64> {
    let mut v = vec![0u64; dim];
    for &(i, c) in a {
        v[i] = field.add(v[i], c);
    }
    v
}

/// A finite-dimensional associative unital algebra given by structure
/// constants on a distinguished basis, together with a designated complete
/// orthogonal idempotent family of basis elements.
#[derive(Debug, Clone)]
pub struct StructAlgebra {
    pub field: Fp,
    pub dim: usize,
    pub labels: Vec<String>,
    pub unit: Lin,
    pub idems: Vec<usize>,
    mul: Vec<Lin>,
}

impl StructAlgebra {
    pub fn new(
        field: Fp,
        labels: Vec<String>,
        mul: Vec<Lin>,
        unit: Lin,
        idems: Vec<usize>,
    ) -> Result<StructAlgebra, AlgError> {
        let dim = labels.len();
        assert_eq!(mul.len(), dim * dim);
        let alg = StructAlgebra { field, dim, labels, unit, idems, mul };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<(), AlgError> {
        let d = self.dim;
        for a in 0..d {
            if self.mul_lin(&self.unit, &lin_single(a)) != lin_single(a)
                || self.mul_lin(&lin_single(a), &self.unit) != lin_single(a)
            {
                return Err(AlgError::NotAnAlgebra(format!("unit law fails at basis {a}")));
            }
        }
        for a in 0..d {
            for b in 0..d {
                let ab = self.mul_basis(a, b).clone();
                for c in 0..d {
                    let left = self.mul_lin(&ab, &lin_single(c));
                    let right = self.mul_lin(&lin_single(a), self.mul_basis(b, c));
                    if left != right {
                        return Err(AlgError::NotAnAlgebra(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let mut total: Lin = vec![];
        for (k, &e) in self.idems.iter().enumerate() {
            for (l, &f) in self.idems.iter().enumerate() {
                let prod = self.mul_basis(e, f);
                let expect = if k == l { lin_single(e) } else { vec![] };
                if *prod != expect {
                    return Err(AlgError::NotAnAlgebra(format!(
                        "idempotent family not orthogonal at ({e},{f})"
                    )));
                }
            }
            total = lin_add(self.field, &total, &lin_single(e));
        }
        if total != self.unit {
            return Err(AlgError::NotAnAlgebra("idempotents do not sum to the unit".into()));
        }
        Ok(())
    }

    pub fn mul_basis(&self, a: usize, b: usize) -> &Lin {
        &self.mul[a * self.dim + b]
    }

    pub fn mul_lin(&self, x: &Lin, y: &Lin) -> Lin {
        let mut terms = Vec::new();
        for &(a, ca) in x {
            for &(b, cb) in y {
                let s = self.field.mul(ca, cb);
                for &(r, cr) in self.mul_basis(a, b) {
                    terms.push((r, self.field.mul(s, cr)));
                }
            }
        }
        lin_normalize(self.field, terms)
    }

    /// The opposite algebra on the same basis.
    pub fn opposite(&self) -> StructAlgebra {
        let d = self.dim;
        let mut mul = vec![Vec::new(); d * d];
        for a in 0..d {
            for b in 0..d {
                mul[a * d + b] = self.mul[b * d + a].clone();
            }
        }
        StructAlgebra {
            field: self.field,
            dim: d,
            labels: self.labels.clone(),
            unit: self.unit.clone(),
            idems: self.idems.clone(),
            mul,
        }
    }

    /// Left-multiplication matrix of a basis element.
    pub fn left_mul_matrix(&self, a: usize) -> FpMat {
        let mut m = FpMat::zeros(self.field, self.dim, self.dim);
        for b in 0..self.dim {
            for &(r, c) in self.mul_basis(a, b) {
                m.set(r, b, c);
            }
        }
        m
    }
}

/// The category algebra: basis indexed by morphisms, product by composition
/// when defined and zero otherwise, idempotents the object identities.
pub fn category_algebra(cat: &EICategory, field: Fp) -> StructAlgebra {
    let d = cat.num_morphisms();
    let mut mul = vec![Vec::new(); d * d];
    for a in 0..d {
        for b in 0..d {
            if let Some(c) = cat.compose(a, b) {
                mul[a * d + b] = lin_single(c);
            }
        }
    }
    let unit = lin_normalize(field, cat.identity.iter().map(|&e| (e, 1)).collect());
    let labels = cat.mors.iter().map(|m| m.label.clone()).collect();
    StructAlgebra::new(field, labels, mul, unit, cat.identity.clone())
        .expect("category algebras satisfy the algebra axioms")
}

/// A finite group acting on an algebra by automorphisms that permute the
/// distinguished basis.
#[derive(Debug, Clone)]
pub struct AlgebraAction {
    pub group: FinGroup,
    perms: Vec<Vec<usize>>,
}

impl AlgebraAction {
    pub fn new(alg: &StructAlgebra, group: FinGroup, perms: Vec<Vec<usize>>) -> Result<AlgebraAction, AlgError> {
        if perms.len() != group.order() {
            return Err(AlgError::ActionInvalid("wrong number of permutations".into()));
        }
        for (g, p) in perms.iter().enumerate() {
            if p.len() != alg.dim {
                return Err(AlgError::ActionInvalid(format!("permutation {g} has wrong length")));
            }
            let mut seen = vec![false; alg.dim];
            for &x in p {
                if x >= alg.dim || seen[x] {
                    return Err(AlgError::ActionInvalid(format!("element {g} is not a bijection")));
                }
                seen[x] = true;
            }
            // Automorphism: products of basis elements map consistently.
            for a in 0..alg.dim {
                for b in 0..alg.dim {
                    let moved = lin_normalize(
                        alg.field,
                        alg.mul_basis(a, b).iter().map(|&(r, c)| (p[r], c)).collect(),
                    );
                    if moved != *alg.mul_basis(p[a], p[b]) {
                        return Err(AlgError::ActionInvalid(format!(
                            "element {g} is not multiplicative at ({a},{b})"
                        )));
                    }
                }
            }
            let unit_moved =
                lin_normalize(alg.field, alg.unit.iter().map(|&(r, c)| (p[r], c)).collect());
            if unit_moved != alg.unit {
                return Err(AlgError::ActionInvalid(format!("element {g} moves the unit")));
            }
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                for a in 0..alg.dim {
                    if perms[gh][a] != perms[g][perms[h][a]] {
                        return Err(AlgError::ActionInvalid("not a group homomorphism".into()));
                    }
                }
            }
        }
        if (0..alg.dim).any(|a| perms[0][a] != a) {
            return Err(AlgError::ActionInvalid("identity must act trivially".into()));
        }
        Ok(AlgebraAction { group, perms })
    }

    pub fn apply(&self, g: usize, basis: usize) -> usize {
        self.perms[g][basis]
    }
}

/// The skew group algebra `A # G`: basis `a # g`, product
/// `(b # h)(a # g) = b·h(a) # hg`. Basis index of `a # g` is `a·|G| + g`.
pub fn skew_group_algebra(alg: &StructAlgebra, act: &AlgebraAction) -> Result<StructAlgebra, AlgError> {
    let ng = act.group.order();
    let d = alg.dim * ng;
    let idx = |a: usize, g: usize| a * ng + g;
    let mut mul = vec![Vec::new(); d * d];
    for b in 0..alg.dim {
        for h in 0..ng {
            for a in 0..alg.dim {
                for g in 0..ng {
                    let onto = act.group.mul(h, g);
                    let prod = alg.mul_basis(b, act.apply(h, a));
                    mul[idx(b, h) * d + idx(a, g)] = prod
                        .iter()
                        .map(|&(r, c)| (idx(r, onto), c))
                        .collect();
                }
            }
        }
    }
    let unit: Lin = lin_normalize(alg.field, alg.unit.iter().map(|&(r, c)| (idx(r, 0), c)).collect());
    let idems: Vec<usize> = alg.idems.iter().map(|&e| idx(e, 0)).collect();
    let labels = (0..d)
        .map(|k| format!("{}#{}", alg.labels[k / ng], act.group.label(k % ng)))
        .collect();
    StructAlgebra::new(alg.field, labels, mul, unit, idems)
}

/// Relations of a bound quiver presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    /// `eps_v^power = 0`.
    EpsPower { vertex: usize, power: usize },
    /// `eps_t^tgt_pow · alpha = alpha · eps_s^src_pow`.
    EpsCommute { arrow: usize, tgt_pow: usize, src_pow: usize },
}

/// A quiver-with-relations presentation of an algebra (loops allowed).
#[derive(Debug, Clone)]
pub struct BoundQuiverPresentation {
    pub num_vertices: usize,
    /// `(name, src, dst)` per arrow.
    pub arrows: Vec<(String, usize, usize)>,
    pub relations: Vec<Relation>,
    /// A power of the arrow ideal contained in the relation ideal
    /// (equivalently, the nilpotency index of the radical).
    pub admissibility_witness: usize,
}

/// An algebra together with a monomial basis graded by source, target and
/// path length; enough structure for projective covers and transposes.
#[derive(Debug, Clone)]
pub struct PresentedAlgebra {
    pub alg: StructAlgebra,
    pub pres: BoundQuiverPresentation,
    pub num_vertices: usize,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub len: Vec<usize>,
    /// Basis index of the trivial path at each vertex.
    pub vertex_idem: Vec<usize>,
}

impl PresentedAlgebra {
    /// The opposite presented algebra: sources and targets swap.
    pub fn opposite(&self) -> PresentedAlgebra {
        let pres = BoundQuiverPresentation {
            num_vertices: self.pres.num_vertices,
            arrows: self.pres.arrows.iter().map(|(n, s, t)| (format!("{n}~"), *t, *s)).collect(),
            relations: self.pres.relations.clone(),
            admissibility_witness: self.pres.admissibility_witness,
        };
        PresentedAlgebra {
            alg: self.alg.opposite(),
            pres,
            num_vertices: self.num_vertices,
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            len: self.len.clone(),
            vertex_idem: self.vertex_idem.clone(),
        }
    }

    /// Basis indices of the projective `A·e_v`, the elements with source `v`.
    pub fn projective_basis(&self, v: usize) -> Vec<usize> {
        (0..self.alg.dim).filter(|&b| self.src[b] == v).collect()
    }

    /// Basis of the radical: the positive-length monomials.
    pub fn radical_basis(&self) -> Vec<usize> {
        (0..self.alg.dim).filter(|&b| self.len[b] >= 1).collect()
    }
}

/// A path algebra with its path list (basis order = path enumeration order).
#[derive(Debug, Clone)]
pub struct PathAlgebra {
    pub pa: PresentedAlgebra,
    pub quiver: Quiver,
    pub paths: Vec<Path>,
}

/// The path algebra of an acyclic quiver; basis = paths, product =
/// concatenation when composable.
pub fn path_algebra(q: &Quiver, field: Fp) -> PathAlgebra {
    let paths = enumerate_paths(q, VertexSel::Any, VertexSel::Any);
    let d = paths.len();
    let index: HashMap<&Path, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut mul = vec![Vec::new(); d * d];
    for (a, pa) in paths.iter().enumerate() {
        for (b, pb) in paths.iter().enumerate() {
            if pa.source == pb.target {
                let comp = pa.after(pb);
                mul[a * d + b] = lin_single(index[&comp]);
            }
        }
    }
    let vertex_idem: Vec<usize> = (0..q.num_vertices())
        .map(|v| paths.iter().position(|p| p.is_empty() && p.source == v).unwrap())
        .collect();
    let unit = lin_normalize(field, vertex_idem.iter().map(|&e| (e, 1)).collect());
    let labels = paths
        .iter()
        .map(|p| {
            if p.is_empty() {
                format!("e{}", q.vertex_label(p.source))
            } else {
                p.arrows.iter().rev().map(|&a| q.arrow_label(a)).collect::<Vec<_>>().join("")
            }
        })
        .collect();
    let alg = StructAlgebra::new(field, labels, mul, unit, vertex_idem.clone())
        .expect("path algebras satisfy the algebra axioms");
    let max_len = paths.iter().map(|p| p.len()).max().unwrap_or(0);
    let pres = BoundQuiverPresentation {
        num_vertices: q.num_vertices(),
        arrows: (0..q.num_arrows())
            .map(|a| (q.arrow_label(a), q.src(a), q.dst(a)))
            .collect(),
        relations: vec![],
        admissibility_witness: max_len + 1,
    };
    let pa = PresentedAlgebra {
        alg,
        pres,
        num_vertices: q.num_vertices(),
        src: paths.iter().map(|p| p.source).collect(),
        tgt: paths.iter().map(|p| p.target).collect(),
        len: paths.iter().map(|p| p.len()).collect(),
        vertex_idem,
    };
    PathAlgebra { pa, quiver: q.clone(), paths }
}

/// The basis permutation action on a path algebra induced by a quiver action.
pub fn path_algebra_action(pa: &PathAlgebra, act: &QuiverAction) -> Result<AlgebraAction, AlgError> {
    let index: HashMap<&Path, usize> = pa.paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let perms: Vec<Vec<usize>> = (0..act.group.order())
        .map(|g| {
            pa.paths
                .iter()
                .map(|p| {
                    let moved = Path {
                        source: act.vertex(g, p.source),
                        target: act.vertex(g, p.target),
                        arrows: p.arrows.iter().map(|&a| act.arrow(g, a)).collect(),
                    };
                    index[&moved]
                })
                .collect()
        })
        .collect();
    AlgebraAction::new(&pa.pa.alg, act.group.clone(), perms)
}

/// A monomial of the Cartan-triple algebra: a path through the orientation
/// arrows with a loop exponent at each visited vertex, in normal form (the
/// exponent left of each arrow is below the commutation threshold).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HMonomial {
    pub src: usize,
    pub tgt: usize,
    /// Arrow ids in application order.
    pub arrows: Vec<usize>,
    /// Loop exponents; `eps[k]` sits after `k` arrows (so `eps[0]` is at the
    /// source).
    pub eps: Vec<usize>,
}

/// The algebra attached to a Cartan triple, with its normal-form monomial
/// basis and presentation.
#[derive(Debug, Clone)]
pub struct HAlgebra {
    pub pa: PresentedAlgebra,
    pub triple: CartanTriple,
    pub monomials: Vec<HMonomial>,
    /// Basis index of the loop `eps_v` when the symmetrizer entry exceeds 1.
    pub eps_index: Vec<Option<usize>>,
    /// Basis index of each bare orientation arrow.
    pub arrow_index: Vec<usize>,
    /// `(i, j, g)` per orientation arrow, matching the Cartan-type quiver.
    pub arrow_info: Vec<(usize, usize, usize)>,
    /// The orientation quiver (loops omitted).
    pub quiver: Quiver,
}

struct HContext {
    c: Vec<usize>,
    /// Per arrow: commutation threshold on the target side.
    f_t: Vec<usize>,
    /// Per arrow: exponent gained on the source side per push.
    f_s: Vec<usize>,
    arrow_tgt: Vec<usize>,
}

impl HContext {
    fn normalize(&self, mut m: HMonomial) -> Option<HMonomial> {
        let n = m.arrows.len();
        for k in (1..=n).rev() {
            let a = m.arrows[k - 1];
            while m.eps[k] >= self.f_t[a] {
                m.eps[k] -= self.f_t[a];
                m.eps[k - 1] += self.f_s[a];
            }
        }
        if m.eps[0] >= self.c[m.src] {
            return None;
        }
        Some(m)
    }

    fn mul(&self, x: &HMonomial, y: &HMonomial) -> Option<HMonomial> {
        if x.src != y.tgt {
            return None;
        }
        let mut arrows = y.arrows.clone();
        arrows.extend_from_slice(&x.arrows);
        let mut eps = y.eps.clone();
        *eps.last_mut().unwrap() += x.eps[0];
        eps.extend_from_slice(&x.eps[1..]);
        self.normalize(HMonomial { src: y.src, tgt: x.tgt, arrows, eps })
    }
}

/// Builds the bound quiver algebra of a Cartan triple over a prime field:
/// loops `eps_v` truncated at the symmetrizer entry and the loop-arrow
/// commutation relations, with the normal-form monomial basis.
pub fn algebra_h(ct: &CartanTriple, field: Fp) -> Result<HAlgebra, AlgError> {
    ct.ensure_valid()?;
    let cart = cartan_type_ei_quiver(ct)?;
    let quiver = cart.eiquiver.quiver.clone();
    let c: Vec<usize> = ct.d.iter().map(|&x| x as usize).collect();
    let mut f_t = Vec::with_capacity(quiver.num_arrows());
    let mut f_s = Vec::with_capacity(quiver.num_arrows());
    for &(i, j, _) in &cart.arrow_info {
        let g = gcd(c[i], c[j]);
        f_t.push(c[i] / g);
        f_s.push(c[j] / g);
    }
    let ctx = HContext {
        c: c.clone(),
        f_t,
        f_s,
        arrow_tgt: (0..quiver.num_arrows()).map(|a| quiver.dst(a)).collect(),
    };

    // Enumerate the normal-form monomials along each arrow path.
    let paths = enumerate_paths(&quiver, VertexSel::Any, VertexSel::Any);
    let mut monomials = Vec::new();
    for p in &paths {
        let m = p.arrows.len();
        let mut bounds = Vec::with_capacity(m + 1);
        bounds.push(c[p.source]);
        for &a in &p.arrows {
            bounds.push(ctx.f_t[a]);
        }
        let mut eps = vec![0usize; m + 1];
        loop {
            monomials.push(HMonomial {
                src: p.source,
                tgt: p.target,
                arrows: p.arrows.clone(),
                eps: eps.clone(),
            });
            // Odometer over the exponent vector, last position fastest.
            let mut k = m + 1;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                eps[k] += 1;
                if eps[k] < bounds[k] {
                    break;
                }
                eps[k] = 0;
            }
            if eps.iter().all(|&e| e == 0) {
                break;
            }
        }
    }
    let index: HashMap<HMonomial, usize> =
        monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let d = monomials.len();
    let mut mul = vec![Vec::new(); d * d];
    for (a, ma) in monomials.iter().enumerate() {
        for (b, mb) in monomials.iter().enumerate() {
            if let Some(prod) = ctx.mul(ma, mb) {
                mul[a * d + b] = lin_single(index[&prod]);
            }
        }
    }
    let vertex_idem: Vec<usize> = (0..ct.n)
        .map(|v| {
            monomials
                .iter()
                .position(|m| m.arrows.is_empty() && m.src == v && m.eps[0] == 0)
                .unwrap()
        })
        .collect();
    let unit = lin_normalize(field, vertex_idem.iter().map(|&e| (e, 1)).collect());
    let labels: Vec<String> = monomials
        .iter()
        .map(|m| {
            let mut parts = Vec::new();
            for k in (0..=m.arrows.len()).rev() {
                let v = if k == 0 { m.src } else { ctx.arrow_tgt[m.arrows[k - 1]] };
                if m.eps[k] > 0 {
                    if m.eps[k] == 1 {
                        parts.push(format!("eps{}", ct.labels[v]));
                    } else {
                        parts.push(format!("eps{}^{}", ct.labels[v], m.eps[k]));
                    }
                }
                if k > 0 {
                    parts.push(quiver.arrow_label(m.arrows[k - 1]));
                }
            }
            if parts.is_empty() {
                format!("e{}", ct.labels[m.src])
            } else {
                parts.join("*")
            }
        })
        .collect();
    let alg = StructAlgebra::new(field, labels, mul, unit, vertex_idem.clone())?;

    let mut relations: Vec<Relation> = (0..ct.n)
        .map(|v| Relation::EpsPower { vertex: v, power: c[v] })
        .collect();
    for a in 0..quiver.num_arrows() {
        relations.push(Relation::EpsCommute { arrow: a, tgt_pow: ctx.f_t[a], src_pow: ctx.f_s[a] });
    }
    let mut arrows: Vec<(String, usize, usize)> = (0..ct.n)
        .map(|v| (format!("eps{}", ct.labels[v]), v, v))
        .collect();
    for a in 0..quiver.num_arrows() {
        arrows.push((quiver.arrow_label(a), quiver.src(a), quiver.dst(a)));
    }
    // Radical nilpotency index as the admissibility witness.
    let len: Vec<usize> = monomials
        .iter()
        .map(|m| m.arrows.len() + m.eps.iter().sum::<usize>())
        .collect();
    let witness = len.iter().max().copied().unwrap_or(0) + 1;
    let pres = BoundQuiverPresentation {
        num_vertices: ct.n,
        arrows,
        relations,
        admissibility_witness: witness,
    };
    let pa = PresentedAlgebra {
        alg,
        pres,
        num_vertices: ct.n,
        src: monomials.iter().map(|m| m.src).collect(),
        tgt: monomials.iter().map(|m| m.tgt).collect(),
        len,
        vertex_idem,
    };
    let eps_index: Vec<Option<usize>> = (0..ct.n)
        .map(|v| {
            monomials
                .iter()
                .position(|m| m.arrows.is_empty() && m.src == v && m.eps[0] == 1)
        })
        .collect();
    let arrow_index: Vec<usize> = (0..quiver.num_arrows())
        .map(|a| {
            monomials
                .iter()
                .position(|m| m.arrows == vec![a] && m.eps.iter().all(|&e| e == 0))
                .unwrap()
        })
        .collect();
    Ok(HAlgebra {
        pa,
        triple: ct.clone(),
        monomials,
        eps_index,
        arrow_index,
        arrow_info: cart.arrow_info.clone(),
        quiver,
    })
}

/// The verified identification of the Cartan-triple algebra with the
/// category algebra of the Cartan-type category: vertex idempotents map to
/// identities, each loop to `eta - Id`, each arrow to the canonical
/// generator class of its biset, extended multiplicatively.
#[derive(Debug, Clone)]
pub struct ThetaIso {
    pub h: HAlgebra,
    pub cartan: CartanEIQuiver,
    pub free: FreeEICat,
    pub kc: StructAlgebra,
    /// Column `b` is the image of the `b`-th basis monomial in the category
    /// algebra basis.
    pub matrix: FpMat,
}

impl ThetaIso {
    pub fn image_of_basis(&self, b: usize) -> Lin {
        lin_normalize(
            self.kc.field,
            (0..self.kc.dim).map(|r| (r, self.matrix.get(r, b))).collect(),
        )
    }
}

/// Builds and verifies the isomorphism for triples whose symmetrizer entries
/// are all powers of the field characteristic.
pub fn theta_iso(ct: &CartanTriple, field: Fp) -> Result<ThetaIso, AlgError> {
    for &ci in &ct.d {
        let mut x = ci as u64;
        while x % field.p == 0 {
            x /= field.p;
        }
        if x != 1 {
            return Err(AlgError::PrecondViolated(format!(
                "symmetrizer entry {ci} is not a power of the characteristic {}",
                field.p
            )));
        }
    }
    let h = algebra_h(ct, field)?;
    let cart = cartan_type_ei_quiver(ct)?;
    let free = build_free_ei_category(&cart.eiquiver);
    let kc = category_algebra(&free.cat, field);
    if h.pa.alg.dim != kc.dim {
        return Err(AlgError::NotIso(format!(
            "dimension mismatch: {} vs {}",
            h.pa.alg.dim, kc.dim
        )));
    }

    // Images of the generators.
    let id_mor = |v: usize| -> usize {
        let pi = free.paths.iter().position(|p| p.is_empty() && p.source == v).unwrap();
        free.mor_id(pi, &[0])
    };
    let eta_minus_id = |v: usize| -> Lin {
        let pi = free.paths.iter().position(|p| p.is_empty() && p.source == v).unwrap();
        let eta = free.mor_id(pi, &[1]);
        lin_normalize(field, vec![(eta, 1), (id_mor(v), field.p - 1)])
    };
    let arrow_gen = |a: usize| -> Lin {
        let pi = free
            .paths
            .iter()
            .position(|p| p.arrows.len() == 1 && p.arrows[0] == a)
            .unwrap();
        lin_single(free.mor_id(pi, &[cart.gen_class[a]]))
    };

    let mut matrix = FpMat::zeros(field, kc.dim, h.pa.alg.dim);
    for (b, mon) in h.monomials.iter().enumerate() {
        let mut img: Lin = lin_single(id_mor(mon.src));
        for _ in 0..mon.eps[0] {
            img = kc.mul_lin(&eta_minus_id(mon.src), &img);
        }
        for (k, &a) in mon.arrows.iter().enumerate() {
            img = kc.mul_lin(&arrow_gen(a), &img);
            let v = h.quiver.dst(a);
            for _ in 0..mon.eps[k + 1] {
                img = kc.mul_lin(&eta_minus_id(v), &img);
            }
        }
        for &(r, cf) in &img {
            matrix.set(r, b, cf);
        }
    }
    if matrix.rank() != kc.dim {
        return Err(AlgError::NotIso("the linear map is not bijective".into()));
    }
    // Multiplicativity on all basis pairs, and the unit.
    let theta = |x: &Lin| -> Lin {
        let mut terms = Vec::new();
        for &(b, cb) in x {
            for r in 0..kc.dim {
                let v = matrix.get(r, b);
                if v != 0 {
                    terms.push((r, field.mul(v, cb)));
                }
            }
        }
        lin_normalize(field, terms)
    };
    if theta(&h.pa.alg.unit) != kc.unit {
        return Err(AlgError::NotIso("unit is not preserved".into()));
    }
    for a in 0..h.pa.alg.dim {
        for b in 0..h.pa.alg.dim {
            let lhs = theta(h.pa.alg.mul_basis(a, b));
            let rhs = kc.mul_lin(&theta(&lin_single(a)), &theta(&lin_single(b)));
            if lhs != rhs {
                return Err(AlgError::NotIso(format!("multiplicativity fails at ({a},{b})")));
            }
        }
    }
    Ok(ThetaIso { h, cartan: cart, free, kc, matrix })
}

/// Checks that a basis bijection between two algebras carries one structure
/// table onto the other (used for the skew-category / skew-algebra identification).
pub fn verify_basis_isomorphism(a: &StructAlgebra, b: &StructAlgebra, bij: &[usize]) -> bool {
    if a.dim != b.dim || bij.len() != a.dim {
        return false;
    }
    let move_lin = |x: &Lin| -> Lin {
        lin_normalize(b.field, x.iter().map(|&(r, c)| (bij[r], c)).collect())
    };
    if move_lin(&a.unit) != b.unit {
        return false;
    }
    for x in 0..a.dim {
        for y in 0..a.dim {
            if move_lin(a.mul_basis(x, y)) != *b.mul_basis(bij[x], bij[y]) {
                return false;
            }
        }
    }
    true
}

/// The radical of a skew group algebra of a path algebra under a p-group
/// action in characteristic p, with its verification data.
#[derive(Debug, Clone)]
pub struct RadicalSkewReport {
    /// Row-reduced basis of the radical, in skew-algebra coordinates.
    pub basis: Vec<Vec<u64>>,
    pub dim: usize,
    /// Smallest k with radical^k = 0.
    pub nilpotency: usize,
    /// Sizes of the vertex orbits: the quotient is a sum of matrix algebras
    /// of these dimensions.
    pub block_sizes: Vec<usize>,
}

/// Radical of `K∆ # G`: the arrow ideal tensored with the group algebra plus
/// the augmentation ideals of the vertex stabilizers, closed under the group
/// translation. Verifies nilpotency and that the quotient maps isomorphically
/// onto the expected sum of matrix algebras.
pub fn radical_skew(
    path: &PathAlgebra,
    act: &AlgebraAction,
    skew: &StructAlgebra,
) -> Result<RadicalSkewReport, AlgError> {
    let field = skew.field;
    let ng = act.group.order();
    // Setup: characteristic p, acting group a p-group.
    let mut x = ng as u64;
    while x % field.p == 0 {
        x /= field.p;
    }
    if x != 1 {
        return Err(AlgError::PrecondViolated(format!(
            "group order {ng} is not a power of the characteristic {}",
            field.p
        )));
    }
    let d = skew.dim;
    let idx = |a: usize, g: usize| a * ng + g;
    let mut span = RowSpace::new(field, d);
    for b in 0..path.pa.alg.dim {
        if path.pa.len[b] == 0 {
            continue;
        }
        for g in 0..ng {
            let mut v = vec![0u64; d];
            v[idx(b, g)] = 1;
            span.insert(&v);
        }
    }
    // e_i # (x - 1) h for x a nontrivial stabilizer element of vertex i.
    for (v_id, &e) in path.pa.vertex_idem.iter().enumerate() {
        let _ = v_id;
        for xg in 1..ng {
            if act.apply(xg, e) != e {
                continue;
            }
            for h in 0..ng {
                let mut v = vec![0u64; d];
                v[idx(e, act.group.mul(xg, h))] = 1;
                v[idx(e, h)] = field.neg(1);
                span.insert(&v);
            }
        }
    }
    let basis: Vec<Vec<u64>> = span.basis().to_vec();
    let dim = basis.len();

    // The span is a two-sided ideal.
    for v in &basis {
        let vl = lin_normalize(field, v.iter().enumerate().map(|(i, &c)| (i, c)).collect());
        for b in 0..d {
            for prod in [skew.mul_lin(&lin_single(b), &vl), skew.mul_lin(&vl, &lin_single(b))] {
                if !span.contains(&lin_to_vec(field, &prod, d)) {
                    return Err(AlgError::NotAnAlgebra(
                        "radical candidate is not an ideal".into(),
                    ));
                }
            }
        }
    }

    // Nilpotency: powers of the span shrink to zero.
    let mut nilpotency = 1;
    let mut current = basis.clone();
    while !current.is_empty() {
        let mut next = RowSpace::new(field, d);
        for u in &current {
            let ul = lin_normalize(field, u.iter().enumerate().map(|(i, &c)| (i, c)).collect());
            for v in &basis {
                let vl = lin_normalize(field, v.iter().enumerate().map(|(i, &c)| (i, c)).collect());
                let prod = skew.mul_lin(&ul, &vl);
                next.insert(&lin_to_vec(field, &prod, d));
            }
        }
        current = next.basis().to_vec();
        nilpotency += 1;
        if nilpotency > d + 1 {
            return Err(AlgError::NotAnAlgebra("radical candidate is not nilpotent".into()));
        }
    }

    // Quotient check: the matrix-unit map onto ⊕ M_{orbit}(K) is an algebra
    // homomorphism with kernel exactly the span.
    let nv = path.pa.num_vertices;
    let mut orbit_of = vec![usize::MAX; nv];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for v in 0..nv {
        if orbit_of[v] != usize::MAX {
            continue;
        }
        let e = path.pa.vertex_idem[v];
        let mut orb: Vec<usize> = (0..ng)
            .map(|g| {
                let moved = act.apply(g, e);
                path.pa.vertex_idem.iter().position(|&x| x == moved).unwrap()
            })
            .collect();
        orb.sort_unstable();
        orb.dedup();
        for &w in &orb {
            orbit_of[w] = orbits.len();
        }
        orbits.push(orb);
    }
    let block_sizes: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
    let total: usize = block_sizes.iter().map(|m| m * m).sum();
    let offset: Vec<usize> = {
        let mut acc = 0;
        let mut out = Vec::new();
        for m in &block_sizes {
            out.push(acc);
            acc += m * m;
        }
        out
    };
    // phi(e_v # g) = E_{pos(v), pos(g^{-1} v)} in the block of v's orbit.
    let phi_basis = |k: usize| -> Vec<u64> {
        let (b, g) = (k / ng, k % ng);
        let mut out = vec![0u64; total];
        if path.pa.len[b] == 0 {
            let v = path.pa.src[b];
            let ob = orbit_of[v];
            let e_pre = act.apply(act.group.inv(g), path.pa.vertex_idem[v]);
            let w = path.pa.vertex_idem.iter().position(|&x| x == e_pre).unwrap();
            let m = block_sizes[ob];
            let row = orbits[ob].iter().position(|&x| x == v).unwrap();
            let col = orbits[ob].iter().position(|&x| x == w).unwrap();
            out[offset[ob] + row * m + col] = 1;
        }
        out
    };
    let block_mul = |u: &[u64], v: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; total];
        for (ob, &m) in block_sizes.iter().enumerate() {
            for r in 0..m {
                for cc in 0..m {
                    let mut acc = 0u64;
                    for t in 0..m {
                        acc = field
                            .add(acc, field.mul(u[offset[ob] + r * m + t], v[offset[ob] + t * m + cc]));
                    }
                    out[offset[ob] + r * m + cc] = acc;
                }
            }
        }
        out
    };
    let mut image = RowSpace::new(field, total);
    for k in 0..d {
        image.insert(&phi_basis(k));
    }
    if image.dim() != total {
        return Err(AlgError::NotIso("quotient map is not surjective".into()));
    }
    if dim + total != d {
        return Err(AlgError::NotIso(format!(
            "radical dimension {dim} plus semisimple dimension {total} differs from {d}"
        )));
    }
    for v in &basis {
        let mut img = vec![0u64; total];
        for (k, &c) in v.iter().enumerate() {
            if c != 0 {
                let pb = phi_basis(k);
                for (o, x) in img.iter_mut().zip(pb.iter()) {
                    *o = field.add(*o, field.mul(c, *x));
                }
            }
        }
        if img.iter().any(|&x| x != 0) {
            return Err(AlgError::NotIso("radical does not map to zero".into()));
        }
    }
    for a in 0..d {
        for b in 0..d {
            let lhs = {
                let prod = skew.mul_basis(a, b);
                let mut img = vec![0u64; total];
                for &(r, c) in prod {
                    let pb = phi_basis(r);
                    for (o, x) in img.iter_mut().zip(pb.iter()) {
                        *o = field.add(*o, field.mul(c, *x));
                    }
                }
                img
            };
            let rhs = block_mul(&phi_basis(a), &phi_basis(b));
            if lhs != rhs {
                return Err(AlgError::NotIso(format!(
                    "quotient map is not multiplicative at ({a},{b})"
                )));
            }
        }
    }
    Ok(RadicalSkewReport { basis, dim, nilpotency, block_sizes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eicat::{induced_cat_action, skew_category, EIAction, EIQuiver};
    use crate::quiver::a3_with_swap;

    fn f2() -> Fp {
        Fp::new(2)
    }

    #[test]
    fn path_algebra_of_a3_dim_five() {
        let (q, _) = a3_with_swap();
        let pa = path_algebra(&q, f2());
        assert_eq!(pa.pa.alg.dim, 5);
        assert_eq!(pa.pa.radical_basis().len(), 2);
    }

    #[test]
    fn category_algebra_of_skew_dim_ten() {
        let (q, act) = a3_with_swap();
        let eq = EIQuiver::trivial_assignment(&q);
        let free = build_free_ei_category(&eq);
        let ei_act = EIAction::with_identity_isos(&eq, act).unwrap();
        let cat_act = induced_cat_action(&free, &ei_act).unwrap();
        let skew = skew_category(&free.cat, &cat_act).unwrap();
        let alg = category_algebra(&skew, f2());
        assert_eq!(alg.dim, 10);
    }

    #[test]
    fn skew_group_algebra_matches_skew_category_algebra() {
        let (q, act) = a3_with_swap();
        let pa = path_algebra(&q, f2());
        let aact = path_algebra_action(&pa, &act).unwrap();
        let skew_alg = skew_group_algebra(&pa.pa.alg, &aact).unwrap();
        assert_eq!(skew_alg.dim, 10);

        let eq = EIQuiver::trivial_assignment(&q);
        let free = build_free_ei_category(&eq);
        let ei_act = EIAction::with_identity_isos(&eq, act).unwrap();
        let cat_act = induced_cat_action(&free, &ei_act).unwrap();
        let skew_cat = skew_category(&free.cat, &cat_act).unwrap();
        let kc = category_algebra(&skew_cat, f2());
        // The identification sends the morphism (path, g) to path # g, which
        // is the identity on basis indices here.
        let bij: Vec<usize> = (0..kc.dim).collect();
        assert!(verify_basis_isomorphism(&kc, &skew_alg, &bij));
    }

    #[test]
    fn skew_by_trivial_group_is_the_algebra() {
        let (q, _) = a3_with_swap();
        let pa = path_algebra(&q, f2());
        let aact =
            AlgebraAction::new(&pa.pa.alg, FinGroup::trivial(), vec![(0..5).collect()]).unwrap();
        let skew = skew_group_algebra(&pa.pa.alg, &aact).unwrap();
        assert_eq!(skew.dim, pa.pa.alg.dim);
        let bij: Vec<usize> = (0..5).collect();
        assert!(verify_basis_isomorphism(&pa.pa.alg, &skew, &bij));
    }

    #[test]
    fn h_algebra_of_b2_dim_five() {
        let h = algebra_h(&CartanTriple::b2(), f2()).unwrap();
        assert_eq!(h.pa.alg.dim, 5);
        let labels = &h.pa.alg.labels;
        assert!(labels.contains(&"e1".to_string()));
        assert!(labels.contains(&"e2".to_string()));
        assert!(labels.contains(&"eps1".to_string()));
        // eps1 squares to zero, eps2 is absent.
        let eps1 = h.eps_index[0].unwrap();
        assert!(h.pa.alg.mul_basis(eps1, eps1).is_empty());
        assert!(h.eps_index[1].is_none());
        assert_eq!(h.pa.radical_basis().len(), 3);
    }

    #[test]
    fn h_algebra_rank_one_truncation() {
        let ct = CartanTriple::new(vec![vec![2]], vec![4], vec![]);
        let h = algebra_h(&ct, f2()).unwrap();
        assert_eq!(h.pa.alg.dim, 4);
        let eps = h.eps_index[0].unwrap();
        // eps^4 = 0: multiply up the chain.
        let mut x = lin_single(eps);
        for _ in 0..3 {
            x = h.pa.alg.mul_lin(&x, &lin_single(eps));
        }
        assert!(x.is_empty());
    }

    #[test]
    fn h_algebra_symmetric_a2_is_path_algebra() {
        let ct = CartanTriple::new(vec![vec![2, -1], vec![-1, 2]], vec![1, 1], vec![(0, 1)]);
        let h = algebra_h(&ct, f2()).unwrap();
        assert_eq!(h.pa.alg.dim, 3);
        assert!(h.eps_index.iter().all(|e| e.is_none()));
    }

    #[test]
    fn theta_iso_for_b2() {
        let th = theta_iso(&CartanTriple::b2(), f2()).unwrap();
        assert_eq!(th.h.pa.alg.dim, 5);
        assert_eq!(th.kc.dim, 5);
        // eps1 maps to eta1 - Id1, which squares to zero in characteristic 2.
        let eps1 = th.h.eps_index[0].unwrap();
        let img = th.image_of_basis(eps1);
        let sq = th.kc.mul_lin(&img, &img);
        assert!(sq.is_empty());
    }

    #[test]
    fn theta_iso_rank_one() {
        let ct = CartanTriple::new(vec![vec![2]], vec![2], vec![]);
        let th = theta_iso(&ct, f2()).unwrap();
        assert_eq!(th.kc.dim, 2);
    }

    #[test]
    fn theta_iso_rejects_non_p_power() {
        let ct = CartanTriple::new(vec![vec![2]], vec![3], vec![]);
        assert!(matches!(theta_iso(&ct, f2()), Err(AlgError::PrecondViolated(_))));
    }

    #[test]
    fn theta_iso_symmetric_a2() {
        let ct = CartanTriple::new(vec![vec![2, -1], vec![-1, 2]], vec![1, 1], vec![(0, 1)]);
        let th = theta_iso(&ct, f2()).unwrap();
        assert_eq!(th.kc.dim, 3);
    }

    #[test]
    fn radical_of_h_b2() {
        let h = algebra_h(&CartanTriple::b2(), f2()).unwrap();
        let rad = h.pa.radical_basis();
        assert_eq!(rad.len(), 3);
        // Quotient is K x K: the two vertex idempotents.
        assert_eq!(h.pa.alg.dim - rad.len(), 2);
    }

    #[test]
    fn radical_skew_of_a3() {
        let (q, act) = a3_with_swap();
        let pa = path_algebra(&q, f2());
        let aact = path_algebra_action(&pa, &act).unwrap();
        let skew = skew_group_algebra(&pa.pa.alg, &aact).unwrap();
        let rep = radical_skew(&pa, &aact, &skew).unwrap();
        assert_eq!(rep.dim, 5);
        let mut blocks = rep.block_sizes.clone();
        blocks.sort_unstable();
        assert_eq!(blocks, vec![1, 2]);
        assert!(rep.nilpotency <= 4);
    }

    #[test]
    fn radical_skew_rejects_wrong_characteristic() {
        let (q, act) = a3_with_swap();
        let pa = path_algebra(&q, Fp::new(3));
        let aact = path_algebra_action(&pa, &act).unwrap();
        let skew = skew_group_algebra(&pa.pa.alg, &aact).unwrap();
        assert!(matches!(radical_skew(&pa, &aact, &skew), Err(AlgError::PrecondViolated(_))));
    }

    #[test]
    fn opposite_is_involutive() {
        let (q, _) = a3_with_swap();
        let pa = path_algebra(&q, f2());
        let opp = pa.pa.opposite();
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(opp.alg.mul_basis(a, b), pa.pa.alg.mul_basis(b, a));
            }
        }
        assert_eq!(opp.src, pa.pa.tgt);
    }
}
