//! Finite EI quivers, the free EI category they generate, skew group
//! categories, and the EI / admissibility / unique-factorization predicates.
//!
//! Categories are materialized with full composition tables so that every
//! categorical statement used downstream (EI property, freeness, Hom-set
//! cardinalities, functor laws) is decided by exhaustive table checks.

use crate::fingroup::{Biset, FinGroup, GroupError, UnionFind};
use crate::quiver::{enumerate_paths, Path, Quiver, QuiverAction, VertexSel};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EICatError {
    #[error("arrow {0}: biset endpoint groups do not match the arrow endpoints")]
    BisetEndpointMismatch(usize),
    #[error("arrow {0}: the assigned biset is empty")]
    EmptyBiset(usize),
    #[error("not a category: {0}")]
    NotACategory(String),
    #[error("category is not EI")]
    NotEI,
    #[error("invalid action: {0}")]
    ActionInvalid(String),
    #[error("instance too large for the exhaustive check (cap {0})")]
    TooLarge(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A finite EI quiver: an acyclic quiver with a finite group per vertex and a
/// nonempty `(U(t), U(s))`-biset per arrow.
#[derive(Debug, Clone)]
pub struct EIQuiver {
    pub quiver: Quiver,
    pub vertex_group: Vec<FinGroup>,
    pub arrow_biset: Vec<Biset>,
}

impl EIQuiver {
    pub fn new(
        quiver: Quiver,
        vertex_group: Vec<FinGroup>,
        arrow_biset: Vec<Biset>,
    ) -> Result<EIQuiver, EICatError> {
        assert_eq!(vertex_group.len(), quiver.num_vertices());
        assert_eq!(arrow_biset.len(), quiver.num_arrows());
        for a in 0..quiver.num_arrows() {
            let b = &arrow_biset[a];
            if b.size == 0 {
                return Err(EICatError::EmptyBiset(a));
            }
            if b.left != vertex_group[quiver.dst(a)] || b.right != vertex_group[quiver.src(a)] {
                return Err(EICatError::BisetEndpointMismatch(a));
            }
        }
        Ok(EIQuiver { quiver, vertex_group, arrow_biset })
    }

    /// The trivial assignment: trivial groups, one-point bisets.
    pub fn trivial_assignment(q: &Quiver) -> EIQuiver {
        let vertex_group = vec![FinGroup::trivial(); q.num_vertices()];
        let arrow_biset = (0..q.num_arrows())
            .map(|_| Biset::singleton(FinGroup::trivial(), FinGroup::trivial()))
            .collect();
        EIQuiver { quiver: q.clone(), vertex_group, arrow_biset }
    }
}

/// Provenance tag of a morphism in a materialized category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorTag {
    /// `(path, canonical tuple)` in a free EI category; the tuple lists one
    /// biset element per arrow in application order, or a single group
    /// element for a trivial path.
    FreeEi { path: usize, elem: Vec<usize> },
    /// `(base morphism, group element)` in a skew group category.
    Skew { base: usize, g: usize },
    /// Hand-built morphism.
    Opaque,
}

#[derive(Debug, Clone)]
pub struct MorData {
    pub dom: usize,
    pub cod: usize,
    pub label: String,
    pub tag: MorTag,
}

/// A finite category with a full composition table. `compose(f, g)` is
/// `f ∘ g` (g first), defined exactly when `cod(g) = dom(f)`.
#[derive(Debug, Clone)]
pub struct EICategory {
    pub num_objects: usize,
    pub object_labels: Vec<String>,
    pub mors: Vec<MorData>,
    pub identity: Vec<usize>,
    compose: Vec<Option<usize>>,
}

impl EICategory {
    pub fn new(
        num_objects: usize,
        object_labels: Vec<String>,
        mors: Vec<MorData>,
        identity: Vec<usize>,
        compose: Vec<Option<usize>>,
    ) -> Result<EICategory, EICatError> {
        let m = mors.len();
        assert_eq!(compose.len(), m * m);
        assert_eq!(identity.len(), num_objects);
        let cat = EICategory { num_objects, object_labels, mors, identity, compose };
        cat.validate()?;
        Ok(cat)
    }

    fn validate(&self) -> Result<(), EICatError> {
        let m = self.mors.len();
        for (x, &e) in self.identity.iter().enumerate() {
            if self.mors[e].dom != x || self.mors[e].cod != x {
                return Err(EICatError::NotACategory(format!(
                    "identity of object {x} has wrong endpoints"
                )));
            }
        }
        for f in 0..m {
            for g in 0..m {
                let defined = self.mors[f].dom == self.mors[g].cod;
                match self.compose(f, g) {
                    Some(h) => {
                        if !defined {
                            return Err(EICatError::NotACategory(format!(
                                "compose({f},{g}) defined on non-composable pair"
                            )));
                        }
                        if self.mors[h].dom != self.mors[g].dom || self.mors[h].cod != self.mors[f].cod
                        {
                            return Err(EICatError::NotACategory(format!(
                                "compose({f},{g}) has wrong endpoints"
                            )));
                        }
                    }
                    None => {
                        if defined {
                            return Err(EICatError::NotACategory(format!(
                                "compose({f},{g}) missing on composable pair"
                            )));
                        }
                    }
                }
            }
            let (d, c) = (self.mors[f].dom, self.mors[f].cod);
            if self.compose(f, self.identity[d]) != Some(f)
                || self.compose(self.identity[c], f) != Some(f)
            {
                return Err(EICatError::NotACategory(format!("identity law fails at {f}")));
            }
        }
        for f in 0..m {
            for g in 0..m {
                if self.mors[f].dom != self.mors[g].cod {
                    continue;
                }
                for h in 0..m {
                    if self.mors[g].dom != self.mors[h].cod {
                        continue;
                    }
                    let left = self.compose(self.compose(f, g).unwrap(), h);
                    let right = self.compose(f, self.compose(g, h).unwrap());
                    if left != right {
                        return Err(EICatError::NotACategory(format!(
                            "associativity fails at ({f},{g},{h})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_morphisms(&self) -> usize {
        self.mors.len()
    }

    pub fn dom(&self, f: usize) -> usize {
        self.mors[f].dom
    }

    pub fn cod(&self, f: usize) -> usize {
        self.mors[f].cod
    }

    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.compose[f * self.mors.len() + g]
    }

    /// Morphism ids in `Hom(x, y)`, in id order.
    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.mors.len())
            .filter(|&f| self.mors[f].dom == x && self.mors[f].cod == y)
            .collect()
    }

    pub fn is_iso(&self, f: usize) -> bool {
        let (x, y) = (self.mors[f].dom, self.mors[f].cod);
        self.hom(y, x).iter().any(|&h| {
            self.compose(f, h) == Some(self.identity[y]) && self.compose(h, f) == Some(self.identity[x])
        })
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        let (x, y) = (self.mors[f].dom, self.mors[f].cod);
        self.hom(y, x).into_iter().find(|&h| {
            self.compose(f, h) == Some(self.identity[y]) && self.compose(h, f) == Some(self.identity[x])
        })
    }

    /// Objects `x ≅ y`: some isomorphism exists between them.
    pub fn objects_isomorphic(&self, x: usize, y: usize) -> bool {
        x == y || self.hom(x, y).iter().any(|&f| self.is_iso(f))
    }
}

/// Every endomorphism is an isomorphism.
pub fn is_ei(cat: &EICategory) -> bool {
    (0..cat.num_morphisms())
        .filter(|&f| cat.dom(f) == cat.cod(f))
        .all(|f| cat.is_iso(f))
}

/// `Hom(g(x), x)` is empty whenever `g(x) != x`.
pub fn is_admissible(cat: &EICategory, act: &CatAction) -> bool {
    for g in 0..act.group.order() {
        for x in 0..cat.num_objects {
            let gx = act.obj(g, x);
            if gx != x && !cat.hom(gx, x).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The unfactorizable morphisms in `Hom(x, y)`: non-isomorphisms admitting no
/// factorization through two non-isomorphisms, by exhaustive search.
pub fn unfactorizable_morphisms(cat: &EICategory, x: usize, y: usize) -> Result<Vec<usize>, EICatError> {
    if !is_ei(cat) {
        return Err(EICatError::NotEI);
    }
    Ok(cat
        .hom(x, y)
        .into_iter()
        .filter(|&f| is_unfactorizable(cat, f))
        .collect())
}

fn is_unfactorizable(cat: &EICategory, f: usize) -> bool {
    if cat.is_iso(f) {
        return false;
    }
    for g in 0..cat.num_morphisms() {
        if cat.mors[g].dom != cat.dom(f) {
            continue;
        }
        for h in 0..cat.num_morphisms() {
            if cat.mors[h].cod != cat.cod(f) || cat.mors[h].dom != cat.mors[g].cod {
                continue;
            }
            if cat.compose(h, g) == Some(f) && !cat.is_iso(g) && !cat.is_iso(h) {
                return false;
            }
        }
    }
    true
}

/// The endomorphism group of `x` as a [`FinGroup`] (identity reindexed to 0).
pub fn aut_group(cat: &EICategory, x: usize) -> Result<FinGroup, EICatError> {
    if !is_ei(cat) {
        return Err(EICatError::NotEI);
    }
    let mut endos = cat.hom(x, x);
    let idp = endos.iter().position(|&f| f == cat.identity[x]).unwrap();
    endos.swap(0, idp);
    let n = endos.len();
    let index_of = |f: usize| endos.iter().position(|&g| g == f).unwrap();
    let table: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).map(|j| index_of(cat.compose(endos[i], endos[j]).unwrap())).collect())
        .collect();
    let gens: Vec<usize> = if n > 1 { (1..n).collect() } else { vec![] };
    let labels = endos.iter().map(|&f| cat.mors[f].label.clone()).collect();
    Ok(FinGroup::from_mul_table(&table, gens, Some(labels))?)
}

/// Checks the unique factorization property for every morphism; the category
/// must have at most `cap` morphisms.
pub fn is_free_ei(cat: &EICategory, cap: usize) -> Result<bool, EICatError> {
    if !is_ei(cat) {
        return Ok(false);
    }
    if cat.num_morphisms() > cap {
        return Err(EICatError::TooLarge(cap));
    }
    for f in 0..cat.num_morphisms() {
        if cat.is_iso(f) {
            continue;
        }
        let facs = factorizations(cat, f);
        if facs.is_empty() {
            // In a finite EI category a non-isomorphism always factors into
            // unfactorizables, so this cannot happen; treat as non-free.
            return Ok(false);
        }
        for i in 0..facs.len() {
            for j in (i + 1)..facs.len() {
                if !ladder_equivalent(cat, &facs[i], &facs[j]) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// All factorizations of `f` into sequences of unfactorizable morphisms,
/// listed in application order.
fn factorizations(cat: &EICategory, f: usize) -> Vec<Vec<usize>> {
    let unf: Vec<bool> = (0..cat.num_morphisms()).map(|g| is_unfactorizable(cat, g)).collect();
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    fn rec(
        cat: &EICategory,
        unf: &[bool],
        rest: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if unf[rest] {
            prefix.push(rest);
            out.push(prefix.clone());
            prefix.pop();
        }
        for u in 0..cat.num_morphisms() {
            if !unf[u] || cat.dom(u) != cat.dom(rest) {
                continue;
            }
            // rest = psi ∘ u for some psi, necessarily non-iso and shorter.
            for psi in cat.hom(cat.cod(u), cat.cod(rest)) {
                if cat.is_iso(psi) || cat.compose(psi, u) != Some(rest) {
                    continue;
                }
                prefix.push(u);
                rec(cat, unf, psi, prefix, out);
                prefix.pop();
            }
        }
    }
    rec(cat, &unf, f, &mut prefix, &mut out);
    out
}

/// Two factorizations are equivalent when a commuting ladder of isomorphisms
/// connects them.
fn ladder_equivalent(cat: &EICategory, a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.len();
    // gamma_0 = identity at the common domain; search the interior levels.
    fn rec(cat: &EICategory, a: &[usize], b: &[usize], i: usize, prev: usize) -> bool {
        let n = a.len();
        if i == n - 1 {
            // Last square: b_n ∘ prev = a_n.
            return cat.compose(b[i], prev) == Some(a[i]);
        }
        for gamma in cat.hom(cat.cod(a[i]), cat.cod(b[i])) {
            if !cat.is_iso(gamma) {
                continue;
            }
            if cat.compose(gamma, a[i]) != cat.compose(b[i], prev) {
                continue;
            }
            if rec(cat, a, b, i + 1, gamma) {
                return true;
            }
        }
        false
    }
    if n == 0 {
        return true;
    }
    rec(cat, a, b, 0, cat.identity[cat.dom(a[0])])
}

/// A finite group acting on a materialized category by automorphisms.
#[derive(Debug, Clone)]
pub struct CatAction {
    pub group: FinGroup,
    obj_perm: Vec<Vec<usize>>,
    mor_perm: Vec<Vec<usize>>,
}

impl CatAction {
    pub fn new(
        cat: &EICategory,
        group: FinGroup,
        obj_perm: Vec<Vec<usize>>,
        mor_perm: Vec<Vec<usize>>,
    ) -> Result<CatAction, EICatError> {
        let act = CatAction { group, obj_perm, mor_perm };
        act.validate(cat)?;
        Ok(act)
    }

    pub fn trivial(cat: &EICategory, group: FinGroup) -> CatAction {
        CatAction {
            obj_perm: vec![(0..cat.num_objects).collect(); group.order()],
            mor_perm: vec![(0..cat.num_morphisms()).collect(); group.order()],
            group,
        }
    }

    fn validate(&self, cat: &EICategory) -> Result<(), EICatError> {
        let n = self.group.order();
        if self.obj_perm.len() != n || self.mor_perm.len() != n {
            return Err(EICatError::ActionInvalid("wrong number of permutations".into()));
        }
        for g in 0..n {
            for f in 0..cat.num_morphisms() {
                let gf = self.mor_perm[g][f];
                if cat.dom(gf) != self.obj_perm[g][cat.dom(f)]
                    || cat.cod(gf) != self.obj_perm[g][cat.cod(f)]
                {
                    return Err(EICatError::ActionInvalid(format!(
                        "element {g} moves endpoints of morphism {f} inconsistently"
                    )));
                }
            }
            for x in 0..cat.num_objects {
                if self.mor_perm[g][cat.identity[x]] != cat.identity[self.obj_perm[g][x]] {
                    return Err(EICatError::ActionInvalid(format!(
                        "element {g} does not preserve the identity of object {x}"
                    )));
                }
            }
            for f in 0..cat.num_morphisms() {
                for h in 0..cat.num_morphisms() {
                    if cat.dom(f) != cat.cod(h) {
                        continue;
                    }
                    let lhs = self.mor_perm[g][cat.compose(f, h).unwrap()];
                    let rhs = cat.compose(self.mor_perm[g][f], self.mor_perm[g][h]).unwrap();
                    if lhs != rhs {
                        return Err(EICatError::ActionInvalid(format!(
                            "element {g} is not functorial on ({f},{h})"
                        )));
                    }
                }
            }
        }
        for g in 0..n {
            for h in 0..n {
                let gh = self.group.mul(g, h);
                for x in 0..cat.num_objects {
                    if self.obj_perm[gh][x] != self.obj_perm[g][self.obj_perm[h][x]] {
                        return Err(EICatError::ActionInvalid("object action not a homomorphism".into()));
                    }
                }
                for f in 0..cat.num_morphisms() {
                    if self.mor_perm[gh][f] != self.mor_perm[g][self.mor_perm[h][f]] {
                        return Err(EICatError::ActionInvalid("morphism action not a homomorphism".into()));
                    }
                }
            }
        }
        for x in 0..cat.num_objects {
            if self.obj_perm[0][x] != x {
                return Err(EICatError::ActionInvalid("identity element must act trivially".into()));
            }
        }
        Ok(())
    }

    pub fn obj(&self, g: usize, x: usize) -> usize {
        self.obj_perm[g][x]
    }

    pub fn mor(&self, g: usize, f: usize) -> usize {
        self.mor_perm[g][f]
    }

    /// Stabilizer of an object, sorted.
    pub fn obj_stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.group.order()).filter(|&g| self.obj(g, x) == x).collect()
    }
}

/// The skew group category `C ⋊ G`: same objects, morphisms `(f, g)` with
/// `f : g(x) -> y`, composed by `(f', h) ∘ (f, g) = (f' ∘ h(f), hg)`.
pub fn skew_category(cat: &EICategory, act: &CatAction) -> Result<EICategory, EICatError> {
    let ng = act.group.order();
    let m = cat.num_morphisms();
    let idx = |f: usize, g: usize| f * ng + g;
    let mut mors = Vec::with_capacity(m * ng);
    for f in 0..m {
        for g in 0..ng {
            // (f, g): x -> y with f: g(x) -> y, so x = g^{-1}(dom f).
            let dom = act.obj(act.group.inv(g), cat.dom(f));
            mors.push(MorData {
                dom,
                cod: cat.cod(f),
                label: format!("({},{})", cat.mors[f].label, act.group.label(g)),
                tag: MorTag::Skew { base: f, g },
            });
        }
    }
    let identity: Vec<usize> = (0..cat.num_objects).map(|x| idx(cat.identity[x], 0)).collect();
    let total = m * ng;
    let mut compose = vec![None; total * total];
    for f2 in 0..m {
        for h in 0..ng {
            for f1 in 0..m {
                for g in 0..ng {
                    // (f2, h) ∘ (f1, g) requires dom(f2, h) = cod(f1, g).
                    if mors[idx(f2, h)].dom != mors[idx(f1, g)].cod {
                        continue;
                    }
                    let hf1 = act.mor(h, f1);
                    let base = cat
                        .compose(f2, hf1)
                        .expect("h(f1) is composable with f2 whenever the skew pair is");
                    compose[idx(f2, h) * total + idx(f1, g)] =
                        Some(idx(base, act.group.mul(h, g)));
                }
            }
        }
    }
    EICategory::new(cat.num_objects, cat.object_labels.clone(), mors, identity, compose)
}

/// A free EI category materialized from an EI quiver, remembering the path
/// and canonical-tuple structure of every morphism.
#[derive(Debug, Clone)]
pub struct FreeEICat {
    pub eiquiver: EIQuiver,
    pub cat: EICategory,
    pub paths: Vec<Path>,
    /// Per path: the sorted list of canonical tuples.
    pub tuples: Vec<Vec<Vec<usize>>>,
    /// Per path: morphism id of the first tuple.
    pub mor_offset: Vec<usize>,
    canon: Vec<HashMap<Vec<usize>, usize>>,
}

impl FreeEICat {
    /// Index of the morphism `(path, tuple)` after canonicalization.
    pub fn mor_id(&self, path: usize, tuple: &[usize]) -> usize {
        let class = self.canon[path][tuple];
        self.mor_offset[path] + class
    }

    /// Path index and canonical tuple of a morphism.
    pub fn path_of(&self, mor: usize) -> (usize, &[usize]) {
        match &self.cat.mors[mor].tag {
            MorTag::FreeEi { path, elem } => (*path, elem),
            _ => unreachable!("free EI category morphisms carry FreeEi tags"),
        }
    }
}

/// Builds the free EI category of a finite EI quiver: `Hom(i, j)` is the
/// disjoint union over paths `p: i -> j` of the biset products `U(p)`,
/// with composition by concatenation and canonicalization.
pub fn build_free_ei_category(eq: &EIQuiver) -> FreeEICat {
    let q = &eq.quiver;
    let paths = enumerate_paths(q, VertexSel::Any, VertexSel::Any);
    let mut tuples: Vec<Vec<Vec<usize>>> = Vec::with_capacity(paths.len());
    let mut canon: Vec<HashMap<Vec<usize>, usize>> = Vec::with_capacity(paths.len());
    for p in &paths {
        let (reps, map) = canonical_tuples(eq, p);
        tuples.push(reps);
        canon.push(map);
    }
    let mut mor_offset = Vec::with_capacity(paths.len());
    let mut mors = Vec::new();
    for (pi, p) in paths.iter().enumerate() {
        mor_offset.push(mors.len());
        for t in &tuples[pi] {
            let label = if p.is_empty() {
                format!("{}:{}", eq.vertex_group[p.source].label(t[0]), q.vertex_label(p.source))
            } else {
                let parts: Vec<String> = p
                    .arrows
                    .iter()
                    .zip(t.iter())
                    .map(|(&a, &u)| format!("{}[{}]", q.arrow_label(a), u))
                    .collect();
                format!("{}<-{}:{}", q.vertex_label(p.target), parts.join("."), q.vertex_label(p.source))
            };
            mors.push(MorData {
                dom: p.source,
                cod: p.target,
                label,
                tag: MorTag::FreeEi { path: pi, elem: t.clone() },
            });
        }
    }
    let identity: Vec<usize> = (0..q.num_vertices())
        .map(|v| {
            let pi = paths.iter().position(|p| p.is_empty() && p.source == v).unwrap();
            mor_offset[pi] + canon[pi][&vec![0usize][..]]
        })
        .collect();
    let total = mors.len();
    // Composition: concatenate tuples along concatenated paths, canonicalize.
    let path_index: HashMap<(usize, usize, Vec<usize>), usize> = paths
        .iter()
        .enumerate()
        .map(|(i, p)| ((p.source, p.target, p.arrows.clone()), i))
        .collect();
    let mut compose = vec![None; total * total];
    for (fi, f) in mors.iter().enumerate() {
        for (gi, g) in mors.iter().enumerate() {
            if f.dom != g.cod {
                continue;
            }
            let (fp, ft) = match &f.tag {
                MorTag::FreeEi { path, elem } => (*path, elem),
                _ => unreachable!(),
            };
            let (gp, gt) = match &g.tag {
                MorTag::FreeEi { path, elem } => (*path, elem),
                _ => unreachable!(),
            };
            let (cp, ct) = compose_path_tuples(eq, &paths, fp, ft, gp, gt);
            let cpi = path_index[&(paths[cp].source, paths[cp].target, paths[cp].arrows.clone())];
            debug_assert_eq!(cpi, cp);
            let class = canon[cp][&ct];
            compose[fi * total + gi] = Some(mor_offset[cp] + class);
        }
    }
    let cat = EICategory::new(
        q.num_vertices(),
        (0..q.num_vertices()).map(|v| q.vertex_label(v)).collect(),
        mors,
        identity,
        compose,
    )
    .expect("the free EI category satisfies the category axioms");
    FreeEICat { eiquiver: eq.clone(), cat, paths, tuples, mor_offset, canon }
}

/// Composes `(fp, ft) ∘ (gp, gt)`: concatenated path index (looked up by
/// content) and the concatenated, not-yet-canonicalized tuple.
fn compose_path_tuples(
    eq: &EIQuiver,
    paths: &[Path],
    fp: usize,
    ft: &[usize],
    gp: usize,
    gt: &[usize],
) -> (usize, Vec<usize>) {
    let f = &paths[fp];
    let g = &paths[gp];
    if f.is_empty() && g.is_empty() {
        // Group multiplication in U(i).
        let u = eq.vertex_group[f.source].mul(ft[0], gt[0]);
        return (fp, vec![u]);
    }
    if f.is_empty() {
        // Left action of U(t(g)) on the last component.
        let a = *g.arrows.last().unwrap();
        let mut t = gt.to_vec();
        let last = t.last_mut().unwrap();
        *last = eq.arrow_biset[a].left_apply(ft[0], *last);
        return (gp, t);
    }
    if g.is_empty() {
        // Right action of U(s(f)) on the first component.
        let a = f.arrows[0];
        let mut t = ft.to_vec();
        t[0] = eq.arrow_biset[a].right_apply(t[0], gt[0]);
        return (fp, t);
    }
    let comp = f.after(g);
    let pi = paths
        .iter()
        .position(|p| p.source == comp.source && p.target == comp.target && p.arrows == comp.arrows)
        .expect("concatenation of paths is a path");
    let mut t = gt.to_vec();
    t.extend_from_slice(ft);
    (pi, t)
}

/// Canonical tuples of `U(p)`: union–find over full tuples with the middle
/// relations, canonical representative = lexicographically least tuple.
fn canonical_tuples(eq: &EIQuiver, p: &Path) -> (Vec<Vec<usize>>, HashMap<Vec<usize>, usize>) {
    if p.is_empty() {
        let n = eq.vertex_group[p.source].order();
        let reps: Vec<Vec<usize>> = (0..n).map(|g| vec![g]).collect();
        let map = reps.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        return (reps, map);
    }
    let sizes: Vec<usize> = p.arrows.iter().map(|&a| eq.arrow_biset[a].size).collect();
    let total: usize = sizes.iter().product();
    let to_tuple = |mut ix: usize| -> Vec<usize> {
        let mut t = vec![0usize; sizes.len()];
        for k in (0..sizes.len()).rev() {
            t[k] = ix % sizes[k];
            ix /= sizes[k];
        }
        t
    };
    let of_tuple = |t: &[usize]| -> usize {
        let mut ix = 0usize;
        for k in 0..t.len() {
            ix = ix * sizes[k] + t[k];
        }
        ix
    };
    let mut uf = UnionFind::new(total);
    for ix in 0..total {
        let t = to_tuple(ix);
        for k in 0..sizes.len() - 1 {
            // (t_{k+1}.h, t_k) ~ (t_{k+1}, h.t_k) for h in U(t(a_k)).
            let middle = &eq.vertex_group[eq.quiver.dst(p.arrows[k])];
            for h in 0..middle.order() {
                let mut t1 = t.clone();
                t1[k + 1] = eq.arrow_biset[p.arrows[k + 1]].right_apply(t1[k + 1], h);
                let mut t2 = t.clone();
                t2[k] = eq.arrow_biset[p.arrows[k]].left_apply(h, t2[k]);
                uf.union(of_tuple(&t1), of_tuple(&t2));
            }
        }
    }
    // Lexicographically least member of each class; tuple enumeration order
    // is already lexicographic.
    let mut rep_of_root: Vec<Option<usize>> = vec![None; total];
    for ix in 0..total {
        let r = uf.find(ix);
        if rep_of_root[r].is_none() {
            rep_of_root[r] = Some(ix);
        }
    }
    let mut rep_ixs: Vec<usize> = rep_of_root.iter().flatten().copied().collect();
    rep_ixs.sort_unstable();
    let reps: Vec<Vec<usize>> = rep_ixs.iter().map(|&ix| to_tuple(ix)).collect();
    let mut map = HashMap::new();
    for ix in 0..total {
        let rep = rep_of_root[uf.find(ix)].unwrap();
        let class = rep_ixs.binary_search(&rep).unwrap();
        map.insert(to_tuple(ix), class);
    }
    (reps, map)
}

/// An EI-quiver action: a quiver action together with compatible
/// isomorphisms of the assigned groups and bisets.
#[derive(Debug, Clone)]
pub struct EIAction {
    pub eiquiver: EIQuiver,
    pub quiver_act: QuiverAction,
    /// `vertex_isos[g][i]`: the group isomorphism `U(i) -> U(g(i))`.
    pub vertex_isos: Vec<Vec<Vec<usize>>>,
    /// `arrow_isos[g][a]`: the biset bijection `U(a) -> U(g(a))`.
    pub arrow_isos: Vec<Vec<Vec<usize>>>,
}

impl EIAction {
    pub fn new(
        eq: &EIQuiver,
        quiver_act: QuiverAction,
        vertex_isos: Vec<Vec<Vec<usize>>>,
        arrow_isos: Vec<Vec<Vec<usize>>>,
    ) -> Result<EIAction, EICatError> {
        let act = EIAction { eiquiver: eq.clone(), quiver_act, vertex_isos, arrow_isos };
        act.validate()?;
        Ok(act)
    }

    /// An action whose group/biset components are identity maps; requires the
    /// assignment to be constant along orbits.
    pub fn with_identity_isos(eq: &EIQuiver, quiver_act: QuiverAction) -> Result<EIAction, EICatError> {
        let ng = quiver_act.group.order();
        let nv = eq.quiver.num_vertices();
        let na = eq.quiver.num_arrows();
        let vertex_isos: Vec<Vec<Vec<usize>>> = (0..ng)
            .map(|_| (0..nv).map(|i| (0..eq.vertex_group[i].order()).collect()).collect())
            .collect();
        let arrow_isos: Vec<Vec<Vec<usize>>> = (0..ng)
            .map(|_| (0..na).map(|a| (0..eq.arrow_biset[a].size).collect()).collect())
            .collect();
        EIAction::new(eq, quiver_act, vertex_isos, arrow_isos)
    }

    fn validate(&self) -> Result<(), EICatError> {
        let eq = &self.eiquiver;
        let ng = self.quiver_act.group.order();
        let err = |msg: String| Err(EICatError::ActionInvalid(msg));
        for g in 0..ng {
            for i in 0..eq.quiver.num_vertices() {
                let gi = self.quiver_act.vertex(g, i);
                let iso = &self.vertex_isos[g][i];
                let (src, dst) = (&eq.vertex_group[i], &eq.vertex_group[gi]);
                if iso.len() != src.order() || dst.order() != src.order() {
                    return err(format!("vertex iso ({g},{i}) has wrong size"));
                }
                for a in 0..src.order() {
                    for b in 0..src.order() {
                        if iso[src.mul(a, b)] != dst.mul(iso[a], iso[b]) {
                            return err(format!("vertex iso ({g},{i}) is not a homomorphism"));
                        }
                    }
                }
                let mut seen = vec![false; iso.len()];
                for &y in iso {
                    if seen[y] {
                        return err(format!("vertex iso ({g},{i}) is not bijective"));
                    }
                    seen[y] = true;
                }
            }
            for a in 0..eq.quiver.num_arrows() {
                let ga = self.quiver_act.arrow(g, a);
                let iso = &self.arrow_isos[g][a];
                let (src, dst) = (&eq.arrow_biset[a], &eq.arrow_biset[ga]);
                if iso.len() != src.size || dst.size != src.size {
                    return err(format!("arrow iso ({g},{a}) has wrong size"));
                }
                let mut seen = vec![false; iso.len()];
                for &y in iso {
                    if seen[y] {
                        return err(format!("arrow iso ({g},{a}) is not bijective"));
                    }
                    seen[y] = true;
                }
                // Equivariance relative to the endpoint group isos.
                let (s, t) = (eq.quiver.src(a), eq.quiver.dst(a));
                let vt = &self.vertex_isos[g][t];
                let vs = &self.vertex_isos[g][s];
                for u in 0..src.size {
                    for h in 0..eq.vertex_group[t].order() {
                        if iso[src.left_apply(h, u)] != dst.left_apply(vt[h], iso[u]) {
                            return err(format!("arrow iso ({g},{a}) not left-equivariant"));
                        }
                    }
                    for k in 0..eq.vertex_group[s].order() {
                        if iso[src.right_apply(u, k)] != dst.right_apply(iso[u], vs[k]) {
                            return err(format!("arrow iso ({g},{a}) not right-equivariant"));
                        }
                    }
                }
            }
        }
        // Composition law: the assignment is a homomorphism into Aut(Q, U).
        let grp = &self.quiver_act.group;
        for g in 0..ng {
            for h in 0..ng {
                let gh = grp.mul(g, h);
                for i in 0..eq.quiver.num_vertices() {
                    let hi = self.quiver_act.vertex(h, i);
                    for a in 0..eq.vertex_group[i].order() {
                        if self.vertex_isos[gh][i][a] != self.vertex_isos[g][hi][self.vertex_isos[h][i][a]] {
                            return err("vertex isos violate the composition law".into());
                        }
                    }
                }
                for al in 0..eq.quiver.num_arrows() {
                    let ha = self.quiver_act.arrow(h, al);
                    for u in 0..eq.arrow_biset[al].size {
                        if self.arrow_isos[gh][al][u] != self.arrow_isos[g][ha][self.arrow_isos[h][al][u]] {
                            return err("arrow isos violate the composition law".into());
                        }
                    }
                }
            }
        }
        for i in 0..eq.quiver.num_vertices() {
            for a in 0..eq.vertex_group[i].order() {
                if self.vertex_isos[0][i][a] != a {
                    return err("identity element must act trivially on vertex groups".into());
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &FinGroup {
        &self.quiver_act.group
    }

    /// The triviality conditions: stabilizers act trivially on their own
    /// vertex groups and arrow bisets.
    pub fn satisfies_triviality_conditions(&self) -> bool {
        let eq = &self.eiquiver;
        for i in 0..eq.quiver.num_vertices() {
            for &g in &self.quiver_act.vertex_stabilizer(i) {
                if (0..eq.vertex_group[i].order()).any(|a| self.vertex_isos[g][i][a] != a) {
                    return false;
                }
            }
        }
        for a in 0..eq.quiver.num_arrows() {
            for &g in &self.quiver_act.arrow_stabilizer(a) {
                if (0..eq.arrow_biset[a].size).any(|u| self.arrow_isos[g][a][u] != u) {
                    return false;
                }
            }
        }
        true
    }
}

/// The categorical action on the free EI category induced by an EI-quiver
/// action: paths map along the quiver action, tuples componentwise.
pub fn induced_cat_action(free: &FreeEICat, act: &EIAction) -> Result<CatAction, EICatError> {
    let ng = act.group().order();
    let obj_perm: Vec<Vec<usize>> = (0..ng)
        .map(|g| (0..free.cat.num_objects).map(|v| act.quiver_act.vertex(g, v)).collect())
        .collect();
    let mor_perm: Vec<Vec<usize>> = (0..ng)
        .map(|g| {
            (0..free.cat.num_morphisms())
                .map(|f| {
                    let (pi, tuple) = free.path_of(f);
                    let p = &free.paths[pi];
                    if p.is_empty() {
                        let v = p.source;
                        let gv = act.quiver_act.vertex(g, v);
                        let gp = free
                            .paths
                            .iter()
                            .position(|q| q.is_empty() && q.source == gv)
                            .unwrap();
                        free.mor_id(gp, &[act.vertex_isos[g][v][tuple[0]]])
                    } else {
                        let arrows: Vec<usize> =
                            p.arrows.iter().map(|&a| act.quiver_act.arrow(g, a)).collect();
                        let src = act.quiver_act.vertex(g, p.source);
                        let tgt = act.quiver_act.vertex(g, p.target);
                        let gp = free
                            .paths
                            .iter()
                            .position(|q| q.source == src && q.target == tgt && q.arrows == arrows)
                            .expect("image of a path is a path");
                        let gt: Vec<usize> = p
                            .arrows
                            .iter()
                            .zip(tuple.iter())
                            .map(|(&a, &u)| act.arrow_isos[g][a][u])
                            .collect();
                        free.mor_id(gp, &gt)
                    }
                })
                .collect()
        })
        .collect();
    CatAction::new(&free.cat, act.group().clone(), obj_perm, mor_perm)
}

/// A functor between two materialized categories, given by object and
/// morphism maps; `check` asserts the functor laws on the full tables.
#[derive(Debug, Clone)]
pub struct Functor {
    pub obj_map: Vec<usize>,
    pub mor_map: Vec<usize>,
}

impl Functor {
    pub fn check(&self, src: &EICategory, dst: &EICategory) -> Result<(), String> {
        for x in 0..src.num_objects {
            if dst.mors[self.mor_map[src.identity[x]]].dom != self.obj_map[x] {
                return Err(format!("identity of object {x} maps to a morphism elsewhere"));
            }
            if self.mor_map[src.identity[x]] != dst.identity[self.obj_map[x]] {
                return Err(format!("identity of object {x} is not preserved"));
            }
        }
        for f in 0..src.num_morphisms() {
            let mf = self.mor_map[f];
            if dst.dom(mf) != self.obj_map[src.dom(f)] || dst.cod(mf) != self.obj_map[src.cod(f)] {
                return Err(format!("morphism {f} has inconsistent image endpoints"));
            }
        }
        for f in 0..src.num_morphisms() {
            for g in 0..src.num_morphisms() {
                if src.dom(f) != src.cod(g) {
                    continue;
                }
                let lhs = self.mor_map[src.compose(f, g).unwrap()];
                let rhs = dst
                    .compose(self.mor_map[f], self.mor_map[g])
                    .ok_or_else(|| format!("images of ({f},{g}) are not composable"))?;
                if lhs != rhs {
                    return Err(format!("composition not preserved at ({f},{g})"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{a3_with_swap, kronecker_with_swap};

    fn a3_free() -> (FreeEICat, CatAction) {
        let (q, act) = a3_with_swap();
        let eq = EIQuiver::trivial_assignment(&q);
        let free = build_free_ei_category(&eq);
        let ei_act = EIAction::with_identity_isos(&eq, act).unwrap();
        let cat_act = induced_cat_action(&free, &ei_act).unwrap();
        (free, cat_act)
    }

    #[test]
    fn path_category_of_a3() {
        let (free, _) = a3_free();
        assert_eq!(free.cat.num_morphisms(), 5);
        assert!(is_ei(&free.cat));
        assert!(is_free_ei(&free.cat, 200).unwrap());
    }

    #[test]
    fn skew_category_of_a3_counts() {
        let (free, act) = a3_free();
        let skew = skew_category(&free.cat, &act).unwrap();
        assert_eq!(skew.num_morphisms(), 10);
        // Per-pair Hom cardinalities from unrolling the definition.
        assert_eq!(skew.hom(0, 0).len(), 2);
        assert_eq!(skew.hom(1, 1).len(), 1);
        assert_eq!(skew.hom(2, 2).len(), 1);
        assert_eq!(skew.hom(1, 2).len(), 1);
        assert_eq!(skew.hom(2, 1).len(), 1);
        assert_eq!(skew.hom(1, 0).len(), 2);
        assert_eq!(skew.hom(2, 0).len(), 2);
        assert!(is_ei(&skew));
        assert!(is_free_ei(&skew, 200).unwrap());
    }

    #[test]
    fn skew_by_trivial_group_is_isomorphic() {
        let (free, _) = a3_free();
        let triv = CatAction::trivial(&free.cat, FinGroup::trivial());
        let skew = skew_category(&free.cat, &triv).unwrap();
        assert_eq!(skew.num_morphisms(), free.cat.num_morphisms());
        for (x, y) in [(0, 0), (1, 0), (2, 0), (1, 2)] {
            assert_eq!(skew.hom(x, y).len(), free.cat.hom(x, y).len());
        }
    }

    #[test]
    fn kronecker_skew_count() {
        let (q, act) = kronecker_with_swap();
        let eq = EIQuiver::trivial_assignment(&q);
        let free = build_free_ei_category(&eq);
        assert_eq!(free.cat.num_morphisms(), 4);
        let ei_act = EIAction::with_identity_isos(&eq, act).unwrap();
        let cat_act = induced_cat_action(&free, &ei_act).unwrap();
        let skew = skew_category(&free.cat, &cat_act).unwrap();
        assert_eq!(skew.num_morphisms(), 8);
        assert!(is_ei(&skew));
    }

    #[test]
    fn unfactorizables_of_path_category() {
        let (free, _) = a3_free();
        let unf = unfactorizable_morphisms(&free.cat, 1, 0).unwrap();
        assert_eq!(unf.len(), 1);
        // Endomorphism sets never contain unfactorizables in an EI category.
        assert!(unfactorizable_morphisms(&free.cat, 0, 0).unwrap().is_empty());
    }

    #[test]
    fn admissibility_of_quiver_actions() {
        let (free, act) = a3_free();
        assert!(is_admissible(&free.cat, &act));
    }

    #[test]
    fn aut_groups_in_skew_category() {
        let (free, act) = a3_free();
        let skew = skew_category(&free.cat, &act).unwrap();
        let aut0 = aut_group(&skew, 0).unwrap();
        assert_eq!(aut0.order(), 2);
        let aut1 = aut_group(&skew, 1).unwrap();
        assert_eq!(aut1.order(), 1);
        // Path categories have trivial automorphism groups.
        assert_eq!(aut_group(&free.cat, 0).unwrap().order(), 1);
    }

    #[test]
    fn non_ei_category_detected() {
        // Two objects, one non-invertible endomorphism t at object 0 with t∘t = t.
        let mors = vec![
            MorData { dom: 0, cod: 0, label: "id".into(), tag: MorTag::Opaque },
            MorData { dom: 0, cod: 0, label: "t".into(), tag: MorTag::Opaque },
        ];
        let compose = vec![Some(0), Some(1), Some(1), Some(1)];
        let cat = EICategory::new(1, vec!["x".into()], mors, vec![0], compose).unwrap();
        assert!(!is_ei(&cat));
        assert_eq!(aut_group(&cat, 0).unwrap_err(), EICatError::NotEI);
        assert!(!is_free_ei(&cat, 100).unwrap());
    }

    #[test]
    fn morphism_count_multiplicativity() {
        let (free, act) = a3_free();
        let skew = skew_category(&free.cat, &act).unwrap();
        assert_eq!(skew.num_morphisms(), free.cat.num_morphisms() * act.group.order());
    }

    #[test]
    fn skew_iso_iff_base_iso() {
        let (free, act) = a3_free();
        let skew = skew_category(&free.cat, &act).unwrap();
        for f in 0..skew.num_morphisms() {
            if let MorTag::Skew { base, .. } = skew.mors[f].tag {
                assert_eq!(skew.is_iso(f), free.cat.is_iso(base));
            }
        }
    }

    #[test]
    fn skew_object_isomorphy_via_orbits() {
        let (free, act) = a3_free();
        let skew = skew_category(&free.cat, &act).unwrap();
        // 1 and 2' lie in one orbit, so they become isomorphic in the skew category.
        assert!(skew.objects_isomorphic(1, 2));
        assert!(!skew.objects_isomorphic(0, 1));
        assert!(!free.cat.objects_isomorphic(1, 2));
    }

    #[test]
    fn skew_unfactorizable_iff_base_unfactorizable() {
        let (free, act) = a3_free();
        let skew = skew_category(&free.cat, &act).unwrap();
        for f in 0..skew.num_morphisms() {
            if let MorTag::Skew { base, .. } = skew.mors[f].tag {
                assert_eq!(
                    is_unfactorizable(&skew, f),
                    is_unfactorizable(&free.cat, base),
                    "morphism {f}"
                );
            }
        }
    }

    #[test]
    fn free_ei_with_nontrivial_groups() {
        // Single arrow with U(i) = U(j) = C2 and the regular (C2, C2)-biset:
        // 2 + 2 + 2 = 6 morphisms.
        let q = Quiver::new(2, vec![(0, 1)]).unwrap();
        let c2 = FinGroup::cyclic(2);
        let eq = EIQuiver::new(
            q,
            vec![c2.clone(), c2.clone()],
            vec![Biset::regular(&c2)],
        )
        .unwrap();
        let free = build_free_ei_category(&eq);
        assert_eq!(free.cat.num_morphisms(), 6);
        assert!(is_ei(&free.cat));
        assert!(is_free_ei(&free.cat, 200).unwrap());
        assert_eq!(unfactorizable_morphisms(&free.cat, 0, 1).unwrap().len(), 2);
    }
}
