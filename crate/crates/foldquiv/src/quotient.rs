//! The quotient EI quiver of a group action on an EI quiver, with explicit
//! section choices, the equivalence functor onto the skew group category,
//! and its verification through the four equivalence conditions.

use crate::eicat::{
    build_free_ei_category, induced_cat_action, is_free_ei, skew_category,
    unfactorizable_morphisms, CatAction, EIAction, EICatError, EICategory, EIQuiver, FreeEICat,
    Functor,
};
use crate::fingroup::{Biset, FinGroup};
use crate::quiver::{quotient_quiver, Quiver};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuotientError {
    #[error("invalid choices: {0}")]
    InvalidChoices(String),
    #[error("no arrow section with the required target exists for orbit arrow {0}")]
    NoCompatibleSection(usize),
    #[error("functor construction failed: {0}")]
    ConstructionFailure(String),
    #[error(transparent)]
    Cat(#[from] EICatError),
}

/// The three maps and the coset decompositions that pin down the quotient
/// assignment: sections of the vertex/arrow orbit projections, a group
/// element aligning the source of each section arrow, and per-arrow coset
/// representatives of the arrow stabilizer inside the target stabilizer.
#[derive(Debug, Clone)]
pub struct QuotientChoices {
    pub iota0: Vec<usize>,
    pub iota1: Vec<usize>,
    pub g_alpha: Vec<usize>,
    pub coset_reps: Vec<Vec<usize>>,
}

/// Per-arrow stabilizer data of the quotient construction. Classes of the
/// middle biset product are normalized to `(h_r, k)` with `h_r` a chosen
/// coset representative and `k` in the source stabilizer.
#[derive(Debug, Clone)]
pub struct QuotArrowData {
    pub stab_t: Vec<usize>,
    pub stab_s: Vec<usize>,
    pub stab_arrow: Vec<usize>,
    pub reps: Vec<usize>,
}

impl QuotArrowData {
    /// Number of normalized classes `(h_r, k)`.
    pub fn num_classes(&self) -> usize {
        self.reps.len() * self.stab_s.len()
    }

    pub fn class_index(&self, r: usize, k_pos: usize) -> usize {
        r * self.stab_s.len() + k_pos
    }

    pub fn class_decode(&self, c: usize) -> (usize, usize) {
        (c / self.stab_s.len(), c % self.stab_s.len())
    }
}

/// The quotient EI quiver together with its provenance: the source EI quiver
/// and action, the orbit projections, and the chosen sections.
#[derive(Debug, Clone)]
pub struct QuotientEIQuiver {
    pub base: EIQuiver,
    pub choices: QuotientChoices,
    pub pi0: Vec<usize>,
    pub pi1: Vec<usize>,
    pub source: EIQuiver,
    pub action: EIAction,
    pub vertex_stab: Vec<Vec<usize>>,
    pub arrow_data: Vec<QuotArrowData>,
}

/// Least-id sections: orbit representatives are least members, the arrow
/// section is the least arrow in its orbit whose target is the chosen vertex
/// representative, the aligning group element is least, and coset
/// representatives are picked greedily from the identity upward.
pub fn default_choices(eq: &EIQuiver, act: &EIAction) -> Result<QuotientChoices, QuotientError> {
    let (qq, pi0, pi1) = quotient_quiver(&eq.quiver, &act.quiver_act)
        .map_err(|e| QuotientError::InvalidChoices(format!("{e}")))?;
    choices_with(eq, act, &qq, &pi0, &pi1, false)
}

/// Greatest-id sections; used to exercise choice independence.
pub fn alternative_choices(eq: &EIQuiver, act: &EIAction) -> Result<QuotientChoices, QuotientError> {
    let (qq, pi0, pi1) = quotient_quiver(&eq.quiver, &act.quiver_act)
        .map_err(|e| QuotientError::InvalidChoices(format!("{e}")))?;
    choices_with(eq, act, &qq, &pi0, &pi1, true)
}

fn choices_with(
    eq: &EIQuiver,
    act: &EIAction,
    qq: &Quiver,
    pi0: &[usize],
    pi1: &[usize],
    greatest: bool,
) -> Result<QuotientChoices, QuotientError> {
    let g = act.group();
    let pick = |cands: Vec<usize>| -> Option<usize> {
        if greatest {
            cands.into_iter().max()
        } else {
            cands.into_iter().min()
        }
    };
    let iota0: Vec<usize> = (0..qq.num_vertices())
        .map(|ob| pick((0..eq.quiver.num_vertices()).filter(|&v| pi0[v] == ob).collect()).unwrap())
        .collect();
    let mut iota1 = Vec::with_capacity(qq.num_arrows());
    let mut g_alpha = Vec::with_capacity(qq.num_arrows());
    for oa in 0..qq.num_arrows() {
        let target_rep = iota0[qq.dst(oa)];
        let cands: Vec<usize> = (0..eq.quiver.num_arrows())
            .filter(|&a| pi1[a] == oa && eq.quiver.dst(a) == target_rep)
            .collect();
        let a = pick(cands).ok_or(QuotientError::NoCompatibleSection(oa))?;
        iota1.push(a);
        let source_rep = iota0[qq.src(oa)];
        let gs: Vec<usize> = (0..g.order())
            .filter(|&x| act.quiver_act.vertex(x, source_rep) == eq.quiver.src(a))
            .collect();
        let ga = pick(gs).ok_or_else(|| {
            QuotientError::InvalidChoices(format!("no group element aligns the source of arrow {a}"))
        })?;
        g_alpha.push(ga);
    }
    let mut coset_reps = Vec::with_capacity(qq.num_arrows());
    for oa in 0..qq.num_arrows() {
        let stab_t = act.quiver_act.vertex_stabilizer(iota0[qq.dst(oa)]);
        let stab_arrow = act.quiver_act.arrow_stabilizer(iota1[oa]);
        // Decompose G_t = ⊔ h_r · G_arrow, identity-first.
        let mut covered = vec![false; g.order()];
        let mut reps = Vec::new();
        let order: Vec<usize> =
            if greatest { stab_t.iter().rev().copied().collect() } else { stab_t.clone() };
        for &h in &order {
            if covered[h] {
                continue;
            }
            reps.push(h);
            for &k in &stab_arrow {
                covered[g.mul(h, k)] = true;
            }
        }
        if greatest {
            // The identity must still represent its own coset, and come first.
            if let Some(pos) = reps.iter().position(|&h| stab_arrow.contains(&g.inv(h))) {
                reps.remove(pos);
                reps.insert(0, 0);
            }
        }
        coset_reps.push(reps);
    }
    Ok(QuotientChoices { iota0, iota1, g_alpha, coset_reps })
}

/// Builds the quotient EI quiver for the given choices. The vertex groups are
/// semidirect products of the assigned groups with the vertex stabilizers;
/// the arrow bisets combine the assigned biset of the section arrow with the
/// stabilizer biset product, with the module-type actions of the quotient
/// construction. When the triviality conditions hold, the simplified
/// direct-product actions are computed as well and cross-checked.
pub fn quotient_ei_quiver(
    eq: &EIQuiver,
    act: &EIAction,
    choices: &QuotientChoices,
) -> Result<QuotientEIQuiver, QuotientError> {
    let (qq, pi0, pi1) = quotient_quiver(&eq.quiver, &act.quiver_act)
        .map_err(|e| QuotientError::InvalidChoices(format!("{e}")))?;
    validate_choices(eq, act, &qq, &pi0, &pi1, choices)?;
    let g = act.group();

    let vertex_stab: Vec<Vec<usize>> = (0..qq.num_vertices())
        .map(|ob| act.quiver_act.vertex_stabilizer(choices.iota0[ob]))
        .collect();

    // Vertex groups: U(iota0(i)) ⋊ G_{iota0(i)}.
    let mut vertex_group = Vec::with_capacity(qq.num_vertices());
    for ob in 0..qq.num_vertices() {
        let v = choices.iota0[ob];
        let stab = &vertex_stab[ob];
        let stab_group = g
            .subgroup_as_group(stab)
            .map_err(|e| QuotientError::InvalidChoices(format!("stabilizer of vertex {v}: {e}")))?;
        let phi: Vec<Vec<usize>> = stab.iter().map(|&x| act.vertex_isos[x][v].clone()).collect();
        let semi = FinGroup::semidirect(&eq.vertex_group[v], &stab_group, &phi)
            .map_err(|e| QuotientError::InvalidChoices(format!("semidirect at vertex {v}: {e}")))?;
        vertex_group.push(semi);
    }

    // Arrow bisets.
    let mut arrow_data = Vec::with_capacity(qq.num_arrows());
    let mut arrow_biset = Vec::with_capacity(qq.num_arrows());
    for oa in 0..qq.num_arrows() {
        let (os, ot) = (qq.src(oa), qq.dst(oa));
        let data = QuotArrowData {
            stab_t: vertex_stab[ot].clone(),
            stab_s: vertex_stab[os].clone(),
            stab_arrow: act.quiver_act.arrow_stabilizer(choices.iota1[oa]),
            reps: choices.coset_reps[oa].clone(),
        };
        let biset = build_arrow_biset(eq, act, choices, oa, os, ot, &data, &vertex_group)?;
        if act.satisfies_triviality_conditions() {
            let simplified =
                build_arrow_biset_simplified(eq, act, choices, oa, os, ot, &data, &vertex_group)?;
            if simplified != biset {
                return Err(QuotientError::ConstructionFailure(format!(
                    "simplified and general actions disagree on orbit arrow {oa}"
                )));
            }
        }
        arrow_data.push(data);
        arrow_biset.push(biset);
    }

    let base = EIQuiver::new(qq, vertex_group, arrow_biset)?;
    Ok(QuotientEIQuiver {
        base,
        choices: choices.clone(),
        pi0,
        pi1,
        source: eq.clone(),
        action: act.clone(),
        vertex_stab,
        arrow_data,
    })
}

fn validate_choices(
    eq: &EIQuiver,
    act: &EIAction,
    qq: &Quiver,
    pi0: &[usize],
    pi1: &[usize],
    ch: &QuotientChoices,
) -> Result<(), QuotientError> {
    let g = act.group();
    let fail = |msg: String| Err(QuotientError::InvalidChoices(msg));
    if ch.iota0.len() != qq.num_vertices() || ch.iota1.len() != qq.num_arrows() {
        return fail("section lengths do not match the quotient".into());
    }
    for (ob, &v) in ch.iota0.iter().enumerate() {
        if pi0[v] != ob {
            return fail(format!("iota0({ob}) = {v} is not in the orbit"));
        }
    }
    for (oa, &a) in ch.iota1.iter().enumerate() {
        if pi1[a] != oa {
            return fail(format!("iota1({oa}) = {a} is not in the orbit"));
        }
        if eq.quiver.dst(a) != ch.iota0[qq.dst(oa)] {
            return fail(format!("t(iota1({oa})) is not the chosen target representative"));
        }
        let ga = ch.g_alpha[oa];
        if eq.quiver.src(a) != act.quiver_act.vertex(ga, ch.iota0[qq.src(oa)]) {
            return fail(format!("s(iota1({oa})) differs from g_alpha(iota0(s))"));
        }
    }
    for (oa, reps) in ch.coset_reps.iter().enumerate() {
        let stab_t = act.quiver_act.vertex_stabilizer(ch.iota0[qq.dst(oa)]);
        let stab_arrow = act.quiver_act.arrow_stabilizer(ch.iota1[oa]);
        if reps.first() != Some(&g.identity()) {
            return fail(format!("coset representatives of arrow {oa} must start with the identity"));
        }
        let mut covered = vec![false; g.order()];
        for &h in reps {
            if !stab_t.contains(&h) {
                return fail(format!("coset representative {h} is outside the target stabilizer"));
            }
            for &k in &stab_arrow {
                let x = g.mul(h, k);
                if covered[x] {
                    return fail(format!("coset representatives of arrow {oa} overlap"));
                }
                covered[x] = true;
            }
        }
        if stab_t.iter().any(|&x| !covered[x]) {
            return fail(format!("coset representatives of arrow {oa} do not cover the stabilizer"));
        }
    }
    Ok(())
}

/// Element encoding of the quotient arrow biset: `u * classes + class` where
/// `class = (r, k)` normalized through the coset decomposition.
fn build_arrow_biset(
    eq: &EIQuiver,
    act: &EIAction,
    ch: &QuotientChoices,
    oa: usize,
    os: usize,
    ot: usize,
    data: &QuotArrowData,
    vertex_group: &[FinGroup],
) -> Result<Biset, QuotientError> {
    let g = act.group();
    let a1 = ch.iota1[oa];
    let ga = ch.g_alpha[oa];
    let u_size = eq.arrow_biset[a1].size;
    let classes = data.num_classes();
    let size = u_size * classes;
    let ns = data.stab_s.len();
    let nt = data.stab_t.len();
    let spos = |k: usize| data.stab_s.binary_search(&k).expect("element of source stabilizer");

    // Right action by (a, x) in U(iota0(s)) ⋊ G_s.
    let right_act: Vec<Vec<usize>> = (0..vertex_group[os].order())
        .map(|e| {
            let (av, x_pos) = (e / ns, e % ns);
            let x = data.stab_s[x_pos];
            (0..size)
                .map(|el| {
                    let (u, c) = (el / classes, el % classes);
                    let (r, k_pos) = data.class_decode(c);
                    let k = data.stab_s[k_pos];
                    // u . (g_alpha k)(a)
                    let gk = g.mul(ga, k);
                    let moved = act.vertex_isos[gk][ch.iota0[os]][av];
                    let u2 = eq.arrow_biset[a1].right_apply(u, moved);
                    let c2 = data.class_index(r, spos(g.mul(k, x)));
                    u2 * classes + c2
                })
                .collect()
        })
        .collect();

    // Left action by (b, h) in U(iota0(t)) ⋊ G_t.
    let left_act: Vec<Vec<usize>> = (0..vertex_group[ot].order())
        .map(|e| {
            let (bv, h_pos) = (e / nt, e % nt);
            let h = data.stab_t[h_pos];
            (0..size)
                .map(|el| {
                    let (u, c) = (el / classes, el % classes);
                    let (r, k_pos) = data.class_decode(c);
                    let k = data.stab_s[k_pos];
                    // h h_r = h_p k'
                    let hhr = g.mul(h, data.reps[r]);
                    let p = data
                        .reps
                        .iter()
                        .position(|&hp| data.stab_arrow.contains(&g.mul(g.inv(hp), hhr)))
                        .expect("coset decomposition covers the stabilizer");
                    let kp = g.mul(g.inv(data.reps[p]), hhr);
                    // (h_p^{-1}(b)) . (k'(u))
                    let b_moved = act.vertex_isos[g.inv(data.reps[p])][ch.iota0[ot]][bv];
                    let u_moved = act.arrow_isos[kp][a1][u];
                    let u2 = eq.arrow_biset[a1].left_apply(b_moved, u_moved);
                    let conj = g.mul(g.mul(g.inv(ga), kp), ga);
                    let c2 = data.class_index(p, spos(g.mul(conj, k)));
                    u2 * classes + c2
                })
                .collect()
        })
        .collect();

    Biset::new(vertex_group[ot].clone(), vertex_group[os].clone(), size, left_act, right_act)
        .map_err(|e| QuotientError::ConstructionFailure(format!("arrow {oa}: {e}")))
}

/// The simplified actions valid under the triviality conditions: stabilizers
/// act trivially on the assigned data, so the twists by vertex and arrow
/// isomorphisms drop out.
fn build_arrow_biset_simplified(
    eq: &EIQuiver,
    act: &EIAction,
    ch: &QuotientChoices,
    oa: usize,
    os: usize,
    ot: usize,
    data: &QuotArrowData,
    vertex_group: &[FinGroup],
) -> Result<Biset, QuotientError> {
    let g = act.group();
    let a1 = ch.iota1[oa];
    let ga = ch.g_alpha[oa];
    let u_size = eq.arrow_biset[a1].size;
    let classes = data.num_classes();
    let size = u_size * classes;
    let ns = data.stab_s.len();
    let nt = data.stab_t.len();
    let spos = |k: usize| data.stab_s.binary_search(&k).expect("element of source stabilizer");
    let normalize = |h: usize, k: usize| -> usize {
        let r = data
            .reps
            .iter()
            .position(|&hr| data.stab_arrow.contains(&g.mul(g.inv(hr), h)))
            .expect("coset decomposition covers the stabilizer");
        let kpp = g.mul(g.inv(data.reps[r]), h);
        let conj = g.mul(g.mul(g.inv(ga), kpp), ga);
        data.class_index(r, spos(g.mul(conj, k)))
    };
    let right_act: Vec<Vec<usize>> = (0..vertex_group[os].order())
        .map(|e| {
            let (av, x_pos) = (e / ns, e % ns);
            let x = data.stab_s[x_pos];
            (0..size)
                .map(|el| {
                    let (u, c) = (el / classes, el % classes);
                    let (r, k_pos) = data.class_decode(c);
                    let k = data.stab_s[k_pos];
                    let u2 = eq.arrow_biset[a1].right_apply(u, act.vertex_isos[ga][ch.iota0[os]][av]);
                    let c2 = data.class_index(r, spos(g.mul(k, x)));
                    u2 * classes + c2
                })
                .collect()
        })
        .collect();
    let left_act: Vec<Vec<usize>> = (0..vertex_group[ot].order())
        .map(|e| {
            let (bv, h_pos) = (e / nt, e % nt);
            let h = data.stab_t[h_pos];
            (0..size)
                .map(|el| {
                    let (u, c) = (el / classes, el % classes);
                    let (r, k_pos) = data.class_decode(c);
                    let k = data.stab_s[k_pos];
                    let u2 = eq.arrow_biset[a1].left_apply(bv, u);
                    let c2 = normalize(g.mul(h, data.reps[r]), k);
                    u2 * classes + c2
                })
                .collect()
        })
        .collect();
    Biset::new(vertex_group[ot].clone(), vertex_group[os].clone(), size, left_act, right_act)
        .map_err(|e| QuotientError::ConstructionFailure(format!("arrow {oa} (simplified): {e}")))
}

impl QuotientEIQuiver {
    /// `|U(iota1(a))| * |G_t| * |G_s| / |G_arrow|`, which the materialized
    /// biset size must equal.
    pub fn expected_biset_size(&self, oa: usize) -> usize {
        let d = &self.arrow_data[oa];
        self.source.arrow_biset[self.choices.iota1[oa]].size * d.stab_t.len() * d.stab_s.len()
            / d.stab_arrow.len()
    }
}

/// The materialized equivalence of Theorem A: the free category on the
/// quotient, the skew group category of the source, and the functor between
/// them.
#[derive(Debug, Clone)]
pub struct QuotientEquivalence {
    pub quotient_cat: FreeEICat,
    pub source_cat: FreeEICat,
    pub skew: EICategory,
    pub cat_action: CatAction,
    pub functor: Functor,
}

/// Builds the functor `C(Q̄, Ū) -> C(Q, U) ⋊ G`: vertex representatives on
/// objects, the stabilizer identification on automorphisms, and
/// `(u, (h_r, k)) -> (h_r(u), h_r g_alpha k)` on arrow generators, extended
/// multiplicatively. Functor laws are asserted on the full tables.
pub fn equivalence_functor(qe: &QuotientEIQuiver) -> Result<QuotientEquivalence, QuotientError> {
    let quotient_cat = build_free_ei_category(&qe.base);
    let source_cat = build_free_ei_category(&qe.source);
    let cat_action = induced_cat_action(&source_cat, &qe.action)?;
    let skew = skew_category(&source_cat.cat, &cat_action)?;
    let g = qe.action.group();
    let ng = g.order();
    let skew_id = |base: usize, x: usize| base * ng + x;

    let obj_map = qe.choices.iota0.clone();
    let mut mor_map = Vec::with_capacity(quotient_cat.cat.num_morphisms());
    for f in 0..quotient_cat.cat.num_morphisms() {
        let (pi, tuple) = quotient_cat.path_of(f);
        let p = &quotient_cat.paths[pi];
        let image = if p.is_empty() {
            generator_image_vertex(qe, &source_cat, p.source, tuple[0], skew_id)
        } else {
            let mut acc: Option<usize> = None;
            for (pos, &oa) in p.arrows.iter().enumerate() {
                let m = generator_image_arrow(qe, &source_cat, oa, tuple[pos], skew_id);
                acc = Some(match acc {
                    None => m,
                    Some(prev) => skew.compose(m, prev).ok_or_else(|| {
                        QuotientError::ConstructionFailure(format!(
                            "generator images along morphism {f} are not composable"
                        ))
                    })?,
                });
            }
            acc.unwrap()
        };
        mor_map.push(image);
    }
    let functor = Functor { obj_map, mor_map };
    functor
        .check(&quotient_cat.cat, &skew)
        .map_err(QuotientError::ConstructionFailure)?;
    Ok(QuotientEquivalence { quotient_cat, source_cat, skew, cat_action, functor })
}

/// Image of an automorphism `(a, x)` of the quotient vertex `ob`: the skew
/// morphism `(a, x)` at the representative vertex.
fn generator_image_vertex(
    qe: &QuotientEIQuiver,
    source_cat: &FreeEICat,
    ob: usize,
    elem: usize,
    skew_id: impl Fn(usize, usize) -> usize,
) -> usize {
    let stab = &qe.vertex_stab[ob];
    let v = qe.choices.iota0[ob];
    let (a, x_pos) = (elem / stab.len(), elem % stab.len());
    let x = stab[x_pos];
    let triv = source_cat
        .paths
        .iter()
        .position(|p| p.is_empty() && p.source == v)
        .unwrap();
    let base = source_cat.mor_id(triv, &[a]);
    skew_id(base, x)
}

/// Image of an arrow generator `(u, (h_r, k))`: `(h_r(u), h_r g_alpha k)`.
fn generator_image_arrow(
    qe: &QuotientEIQuiver,
    source_cat: &FreeEICat,
    oa: usize,
    elem: usize,
    skew_id: impl Fn(usize, usize) -> usize,
) -> usize {
    let g = qe.action.group();
    let data = &qe.arrow_data[oa];
    let classes = data.num_classes();
    let (u, c) = (elem / classes, elem % classes);
    let (r, k_pos) = data.class_decode(c);
    let (hr, k) = (data.reps[r], data.stab_s[k_pos]);
    let a1 = qe.choices.iota1[oa];
    let moved_arrow = qe.action.quiver_act.arrow(hr, a1);
    let moved_elem = qe.action.arrow_isos[hr][a1][u];
    let path = source_cat
        .paths
        .iter()
        .position(|p| p.arrows.len() == 1 && p.arrows[0] == moved_arrow)
        .expect("single-arrow path exists");
    let base = source_cat.mor_id(path, &[moved_elem]);
    skew_id(base, g.mul(g.mul(hr, qe.choices.g_alpha[oa]), k))
}

/// Report on the four equivalence conditions plus the Hom-cardinality
/// identity implied by the equivalence.
#[derive(Debug, Clone)]
pub struct EquivReport {
    pub e1_target_free: bool,
    pub e1_checked_on_source: bool,
    pub e2_injective_on_iso_classes: bool,
    pub e3_dense: bool,
    pub e4_generator_bijection: bool,
    pub hom_cardinalities_match: bool,
    pub failures: Vec<String>,
}

impl EquivReport {
    pub fn all_pass(&self) -> bool {
        self.e1_target_free
            && self.e2_injective_on_iso_classes
            && self.e3_dense
            && self.e4_generator_bijection
            && self.hom_cardinalities_match
    }
}

/// Verifies the equivalence conditions (freeness of the target, injectivity
/// and denseness on isomorphism classes, bijectivity of the unfactorizable
/// restriction) and the Hom-set cardinality identity.
pub fn verify_equivalence(eqv: &QuotientEquivalence, cap: usize) -> EquivReport {
    let mut failures = Vec::new();
    let skew = &eqv.skew;
    let qcat = &eqv.quotient_cat;

    let (e1, on_source) = match is_free_ei(skew, cap) {
        Ok(b) => (b, false),
        // The skew category is free iff the source category is; fall back to
        // the smaller side when the target exceeds the cap.
        Err(_) => match is_free_ei(&eqv.source_cat.cat, cap) {
            Ok(b) => (b, true),
            Err(e) => {
                failures.push(format!("freeness check exceeded the cap on both sides: {e}"));
                (false, true)
            }
        },
    };
    if !e1 {
        failures.push("target category is not free EI".into());
    }

    let nq = qcat.cat.num_objects;
    let mut e2 = true;
    for i in 0..nq {
        for j in (i + 1)..nq {
            if skew.objects_isomorphic(eqv.functor.obj_map[i], eqv.functor.obj_map[j]) {
                e2 = false;
                failures.push(format!("representatives of orbits {i} and {j} are isomorphic"));
            }
        }
    }

    let mut e3 = true;
    for x in 0..skew.num_objects {
        if !(0..nq).any(|i| skew.objects_isomorphic(x, eqv.functor.obj_map[i])) {
            e3 = false;
            failures.push(format!("object {x} misses every representative"));
        }
    }

    let mut e4 = true;
    for i in 0..nq {
        for j in 0..nq {
            let mut images = Vec::new();
            for (pi, p) in qcat.paths.iter().enumerate() {
                if p.arrows.len() != 1 || p.source != i || p.target != j {
                    continue;
                }
                for t in &qcat.tuples[pi] {
                    images.push(eqv.functor.mor_map[qcat.mor_id(pi, t)]);
                }
            }
            let mut sorted = images.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != images.len() {
                e4 = false;
                failures.push(format!("generator images over ({i},{j}) collide"));
                continue;
            }
            let mut hom0 = unfactorizable_morphisms(skew, eqv.functor.obj_map[i], eqv.functor.obj_map[j])
                .unwrap_or_default();
            hom0.sort_unstable();
            if sorted != hom0 {
                e4 = false;
                failures.push(format!(
                    "generator bijection fails over ({i},{j}): {} images vs {} unfactorizables",
                    sorted.len(),
                    hom0.len()
                ));
            }
        }
    }

    let mut hom_ok = true;
    for i in 0..nq {
        for j in 0..nq {
            let lhs = qcat.cat.hom(i, j).len();
            let rhs = skew.hom(eqv.functor.obj_map[i], eqv.functor.obj_map[j]).len();
            if lhs != rhs {
                hom_ok = false;
                failures.push(format!("Hom cardinality mismatch at ({i},{j}): {lhs} vs {rhs}"));
            }
        }
    }

    EquivReport {
        e1_target_free: e1,
        e1_checked_on_source: on_source,
        e2_injective_on_iso_classes: e2,
        e3_dense: e3,
        e4_generator_bijection: e4,
        hom_cardinalities_match: hom_ok,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{a3_with_swap, kronecker_with_swap};

    fn a3_quotient() -> QuotientEIQuiver {
        let (q, act) = a3_with_swap();
        let eq = EIQuiver::trivial_assignment(&q);
        let ei_act = EIAction::with_identity_isos(&eq, act).unwrap();
        let ch = default_choices(&eq, &ei_act).unwrap();
        quotient_ei_quiver(&eq, &ei_act, &ch).unwrap()
    }

    #[test]
    fn default_choices_for_a3() {
        let (q, act) = a3_with_swap();
        let eq = EIQuiver::trivial_assignment(&q);
        let ei_act = EIAction::with_identity_isos(&eq, act).unwrap();
        let ch = default_choices(&eq, &ei_act).unwrap();
        assert_eq!(ch.iota0, vec![0, 1]);
        assert_eq!(ch.iota1, vec![0]);
        assert_eq!(ch.g_alpha, vec![0]);
        assert_eq!(ch.coset_reps, vec![vec![0, 1]]);
    }

    #[test]
    fn default_choices_for_trivial_action() {
        let (q, _) = a3_with_swap();
        let eq = EIQuiver::trivial_assignment(&q);
        let act = crate::quiver::QuiverAction::trivial(&q, FinGroup::trivial());
        let ei_act = EIAction::with_identity_isos(&eq, act).unwrap();
        let ch = default_choices(&eq, &ei_act).unwrap();
        assert_eq!(ch.iota0, vec![0, 1, 2]);
        assert_eq!(ch.iota1, vec![0, 1]);
        assert!(ch.g_alpha.iter().all(|&g| g == 0));
        assert!(ch.coset_reps.iter().all(|r| r == &vec![0]));
    }

    #[test]
    fn a3_quotient_assignment_sizes() {
        let qe = a3_quotient();
        // Ubar(1) = C2, Ubar(2) = trivial, |Ubar(arrow)| = 2.
        assert_eq!(qe.base.vertex_group[0].order(), 2);
        assert_eq!(qe.base.vertex_group[1].order(), 1);
        assert_eq!(qe.base.arrow_biset[0].size, 2);
        assert_eq!(qe.expected_biset_size(0), 2);
    }

    #[test]
    fn kronecker_quotient_biset_size_four() {
        let (q, act) = kronecker_with_swap();
        let eq = EIQuiver::trivial_assignment(&q);
        let ei_act = EIAction::with_identity_isos(&eq, act).unwrap();
        let ch = default_choices(&eq, &ei_act).unwrap();
        assert_eq!(ch.iota1, vec![0]);
        assert_eq!(ch.g_alpha, vec![0]);
        assert_eq!(ch.coset_reps[0], vec![0, 1]);
        let qe = quotient_ei_quiver(&eq, &ei_act, &ch).unwrap();
        assert_eq!(qe.base.arrow_biset[0].size, 4);
        assert_eq!(qe.expected_biset_size(0), 4);
    }

    #[test]
    fn trivial_action_quotient_is_source() {
        let (q, _) = a3_with_swap();
        let eq = EIQuiver::trivial_assignment(&q);
        let act = crate::quiver::QuiverAction::trivial(&q, FinGroup::trivial());
        let ei_act = EIAction::with_identity_isos(&eq, act).unwrap();
        let ch = default_choices(&eq, &ei_act).unwrap();
        let qe = quotient_ei_quiver(&eq, &ei_act, &ch).unwrap();
        assert_eq!(qe.base.quiver.num_vertices(), 3);
        assert_eq!(qe.base.quiver.num_arrows(), 2);
        for v in 0..3 {
            assert_eq!(qe.base.vertex_group[v].order(), 1);
        }
        for a in 0..2 {
            assert_eq!(qe.base.arrow_biset[a].size, 1);
        }
    }

    #[test]
    fn equivalence_verifies_for_a3() {
        let qe = a3_quotient();
        let eqv = equivalence_functor(&qe).unwrap();
        let report = verify_equivalence(&eqv, 200);
        assert!(report.all_pass(), "failures: {:?}", report.failures);
    }

    #[test]
    fn equivalence_verifies_for_kronecker() {
        let (q, act) = kronecker_with_swap();
        let eq = EIQuiver::trivial_assignment(&q);
        let ei_act = EIAction::with_identity_isos(&eq, act).unwrap();
        let ch = default_choices(&eq, &ei_act).unwrap();
        let qe = quotient_ei_quiver(&eq, &ei_act, &ch).unwrap();
        let eqv = equivalence_functor(&qe).unwrap();
        let report = verify_equivalence(&eqv, 200);
        assert!(report.all_pass(), "failures: {:?}", report.failures);
    }

    #[test]
    fn corrupted_g_alpha_is_rejected() {
        let (q, act) = a3_with_swap();
        let eq = EIQuiver::trivial_assignment(&q);
        let ei_act = EIAction::with_identity_isos(&eq, act).unwrap();
        let mut ch = default_choices(&eq, &ei_act).unwrap();
        ch.g_alpha[0] = 1; // wrong: sends iota0(source) to the other orbit member
        assert!(matches!(
            quotient_ei_quiver(&eq, &ei_act, &ch),
            Err(QuotientError::InvalidChoices(_))
        ));
    }

    #[test]
    fn alternative_choices_give_same_hom_profile() {
        let (q, act) = a3_with_swap();
        let eq = EIQuiver::trivial_assignment(&q);
        let ei_act = EIAction::with_identity_isos(&eq, act).unwrap();
        let ch1 = default_choices(&eq, &ei_act).unwrap();
        let ch2 = alternative_choices(&eq, &ei_act).unwrap();
        let qe1 = quotient_ei_quiver(&eq, &ei_act, &ch1).unwrap();
        let qe2 = quotient_ei_quiver(&eq, &ei_act, &ch2).unwrap();
        let c1 = build_free_ei_category(&qe1.base);
        let c2 = build_free_ei_category(&qe2.base);
        for i in 0..c1.cat.num_objects {
            for j in 0..c1.cat.num_objects {
                assert_eq!(c1.cat.hom(i, j).len(), c2.cat.hom(i, j).len());
            }
        }
    }
}
