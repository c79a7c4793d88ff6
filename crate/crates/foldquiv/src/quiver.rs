//! Finite acyclic quivers, path enumeration, quiver automorphism actions,
//! plain quotient quivers, and the coset-quiver generator.

use crate::fingroup::{coset_reps, CosetSide, FinGroup, GSetAction};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuiverError {
    #[error("quiver has a directed cycle")]
    Cyclic,
    #[error("arrow {0} has an endpoint outside the vertex range")]
    BadEndpoint(usize),
    #[error("invalid quiver action: {0}")]
    ActionInvalid(String),
}

/// A finite acyclic quiver. Vertices are `0..num_vertices`, arrows are listed
/// by id; acyclicity is verified at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    num_vertices: usize,
    arrows: Vec<(usize, usize)>,
    vertex_labels: Option<Vec<String>>,
    arrow_labels: Option<Vec<String>>,
}

impl Quiver {
    pub fn new(num_vertices: usize, arrows: Vec<(usize, usize)>) -> Result<Quiver, QuiverError> {
        Quiver::with_labels(num_vertices, arrows, None, None)
    }

    pub fn with_labels(
        num_vertices: usize,
        arrows: Vec<(usize, usize)>,
        vertex_labels: Option<Vec<String>>,
        arrow_labels: Option<Vec<String>>,
    ) -> Result<Quiver, QuiverError> {
        for (a, &(s, t)) in arrows.iter().enumerate() {
            if s >= num_vertices || t >= num_vertices {
                return Err(QuiverError::BadEndpoint(a));
            }
        }
        let q = Quiver { num_vertices, arrows, vertex_labels, arrow_labels };
        if q.topo_order().is_none() {
            return Err(QuiverError::Cyclic);
        }
        Ok(q)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn src(&self, a: usize) -> usize {
        self.arrows[a].0
    }

    pub fn dst(&self, a: usize) -> usize {
        self.arrows[a].1
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn vertex_label(&self, v: usize) -> String {
        match &self.vertex_labels {
            Some(ls) => ls[v].clone(),
            None => format!("{}", v + 1),
        }
    }

    pub fn arrow_label(&self, a: usize) -> String {
        match &self.arrow_labels {
            Some(ls) => ls[a].clone(),
            None => format!("a{a}"),
        }
    }

    /// Topological order (least vertex id first among ready vertices), or
    /// `None` if the quiver has a directed cycle.
    pub fn topo_order(&self) -> Option<Vec<usize>> {
        let n = self.num_vertices;
        let mut indeg = vec![0usize; n];
        for &(_, t) in &self.arrows {
            indeg[t] += 1;
        }
        let mut order = Vec::with_capacity(n);
        let mut done = vec![false; n];
        for _ in 0..n {
            let v = (0..n).find(|&v| !done[v] && indeg[v] == 0)?;
            done[v] = true;
            order.push(v);
            for (a, &(s, t)) in self.arrows.iter().enumerate() {
                let _ = a;
                if s == v {
                    indeg[t] -= 1;
                }
            }
        }
        Some(order)
    }

    /// Rank of each vertex in the topological order.
    pub fn topo_rank(&self) -> Vec<usize> {
        let ord = self.topo_order().expect("quiver is acyclic by construction");
        let mut rank = vec![0usize; self.num_vertices];
        for (r, &v) in ord.iter().enumerate() {
            rank[v] = r;
        }
        rank
    }

    /// Arrow ids leaving `v`, in id order.
    pub fn arrows_from(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.src(a) == v).collect()
    }

    /// Arrow ids entering `v`, in id order.
    pub fn arrows_into(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.dst(a) == v).collect()
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.arrows_from(v).is_empty()
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.arrows_into(v).is_empty()
    }

    /// The same quiver with every arrow incident to `v` reversed.
    pub fn reflect_at(&self, v: usize) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|&(s, t)| if s == v || t == v { (t, s) } else { (s, t) })
            .collect();
        Quiver {
            num_vertices: self.num_vertices,
            arrows,
            vertex_labels: self.vertex_labels.clone(),
            arrow_labels: self.arrow_labels.clone(),
        }
    }

    /// Number of arrows between `i` and `j` in either direction.
    pub fn arrows_between(&self, i: usize, j: usize) -> usize {
        self.arrows
            .iter()
            .filter(|&&(s, t)| (s == i && t == j) || (s == j && t == i))
            .count()
    }
}

/// A path; `arrows[0]` is traversed first. The empty sequence is the trivial
/// path at `source == target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Path {
        Path { source: v, target: v, arrows: vec![] }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Concatenation `self` after `earlier` (requires `earlier.target == self.source`).
    pub fn after(&self, earlier: &Path) -> Path {
        assert_eq!(earlier.target, self.source, "paths not composable");
        let mut arrows = earlier.arrows.clone();
        arrows.extend_from_slice(&self.arrows);
        Path { source: earlier.source, target: self.target, arrows }
    }
}

/// Endpoint selector for [`enumerate_paths`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexSel {
    Any,
    At(usize),
}

impl VertexSel {
    fn admits(&self, v: usize) -> bool {
        match self {
            VertexSel::Any => true,
            VertexSel::At(w) => *w == v,
        }
    }
}

/// All paths with the selected endpoints, ordered by source in topological
/// order, then by arrow-id sequence lexicographically (so the trivial path at
/// a vertex comes first).
pub fn enumerate_paths(q: &Quiver, from: VertexSel, to: VertexSel) -> Vec<Path> {
    let rank = q.topo_rank();
    let mut sources: Vec<usize> = (0..q.num_vertices()).filter(|&v| from.admits(v)).collect();
    sources.sort_by_key(|&v| rank[v]);
    let mut out = Vec::new();
    // Depth-first in lexicographic arrow order.
    fn dfs(q: &Quiver, p: Path, to: &VertexSel, out: &mut Vec<Path>) {
        if to.admits(p.target) {
            out.push(p.clone());
        }
        for a in q.arrows_from(p.target) {
            let mut arrows = p.arrows.clone();
            arrows.push(a);
            dfs(q, Path { source: p.source, target: q.dst(a), arrows }, to, out);
        }
    }
    for v in sources {
        dfs(q, Path::trivial(v), &to, &mut out);
    }
    out
}

/// A finite group acting on a quiver by quiver automorphisms.
#[derive(Debug, Clone)]
pub struct QuiverAction {
    pub group: FinGroup,
    pub vertex_act: GSetAction,
    pub arrow_act: GSetAction,
}

impl QuiverAction {
    pub fn new(
        quiver: &Quiver,
        group: FinGroup,
        vertex_perms: Vec<Vec<usize>>,
        arrow_perms: Vec<Vec<usize>>,
    ) -> Result<QuiverAction, QuiverError> {
        let vertex_act = GSetAction::new(group.clone(), quiver.num_vertices(), vertex_perms)
            .map_err(|e| QuiverError::ActionInvalid(format!("vertex action: {e}")))?;
        let arrow_act = GSetAction::new(group.clone(), quiver.num_arrows(), arrow_perms)
            .map_err(|e| QuiverError::ActionInvalid(format!("arrow action: {e}")))?;
        let act = QuiverAction { group, vertex_act, arrow_act };
        for g in 0..act.group.order() {
            for a in 0..quiver.num_arrows() {
                let ga = act.arrow_act.apply(g, a);
                if quiver.src(ga) != act.vertex_act.apply(g, quiver.src(a))
                    || quiver.dst(ga) != act.vertex_act.apply(g, quiver.dst(a))
                {
                    return Err(QuiverError::ActionInvalid(format!(
                        "arrow {a} is not carried equivariantly by group element {g}"
                    )));
                }
            }
        }
        Ok(act)
    }

    pub fn trivial(quiver: &Quiver, group: FinGroup) -> QuiverAction {
        let vertex_act = GSetAction::trivial(group.clone(), quiver.num_vertices());
        let arrow_act = GSetAction::trivial(group.clone(), quiver.num_arrows());
        QuiverAction { group, vertex_act, arrow_act }
    }

    pub fn vertex(&self, g: usize, v: usize) -> usize {
        self.vertex_act.apply(g, v)
    }

    pub fn arrow(&self, g: usize, a: usize) -> usize {
        self.arrow_act.apply(g, a)
    }

    /// Stabilizer of a vertex, as a sorted element set.
    pub fn vertex_stabilizer(&self, v: usize) -> Vec<usize> {
        self.vertex_act.orbit_stabilizer(v).1
    }

    /// Stabilizer of an arrow, as a sorted element set.
    pub fn arrow_stabilizer(&self, a: usize) -> Vec<usize> {
        self.arrow_act.orbit_stabilizer(a).1
    }
}

/// Validation report for a quiver action, including the per-arrow stabilizer
/// condition `G_alpha = G_{s(alpha)} ∩ G_{t(alpha)}` needed by the folding setup.
#[derive(Debug, Clone)]
pub struct ActionReport {
    pub failures: Vec<String>,
    pub per_arrow_stabilizer: Vec<bool>,
    pub stabilizer_condition: bool,
}

impl ActionReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-checks the action axioms and the per-arrow stabilizer condition,
/// collecting failures instead of erroring.
pub fn check_action(q: &Quiver, act: &QuiverAction) -> ActionReport {
    let mut failures = Vec::new();
    for g in 0..act.group.order() {
        for a in 0..q.num_arrows() {
            let ga = act.arrow(g, a);
            if q.src(ga) != act.vertex(g, q.src(a)) || q.dst(ga) != act.vertex(g, q.dst(a)) {
                failures.push(format!("element {g} does not act equivariantly on arrow {a}"));
            }
        }
    }
    let mut per_arrow = Vec::with_capacity(q.num_arrows());
    for a in 0..q.num_arrows() {
        let ga = act.arrow_stabilizer(a);
        let gs = act.vertex_stabilizer(q.src(a));
        let gt = act.vertex_stabilizer(q.dst(a));
        let inter: Vec<usize> = gs.iter().copied().filter(|x| gt.contains(x)).collect();
        per_arrow.push(ga == inter);
    }
    let stabilizer_condition = per_arrow.iter().all(|&b| b);
    ActionReport { failures, per_arrow_stabilizer: per_arrow, stabilizer_condition }
}

/// The quotient quiver by a group action: vertices and arrows are the orbits
/// (ordered by least member), endpoint maps are induced.
/// Returns the quotient and the vertex/arrow orbit projections.
pub fn quotient_quiver(
    q: &Quiver,
    act: &QuiverAction,
) -> Result<(Quiver, Vec<usize>, Vec<usize>), QuiverError> {
    let vorbits = act.vertex_act.orbits();
    let aorbits = act.arrow_act.orbits();
    let mut pi0 = vec![0usize; q.num_vertices()];
    for (k, orb) in vorbits.iter().enumerate() {
        for &v in orb {
            pi0[v] = k;
        }
    }
    let mut pi1 = vec![0usize; q.num_arrows()];
    let mut arrows = Vec::with_capacity(aorbits.len());
    for (k, orb) in aorbits.iter().enumerate() {
        for &a in orb {
            pi1[a] = k;
        }
        let rep = orb[0];
        arrows.push((pi0[q.src(rep)], pi0[q.dst(rep)]));
    }
    let vertex_labels = Some(
        vorbits
            .iter()
            .map(|orb| {
                let names: Vec<String> = orb.iter().map(|&v| q.vertex_label(v)).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect(),
    );
    // The quotient of an acyclic quiver by a quiver action is again acyclic;
    // Quiver::with_labels re-verifies this.
    Quiver::with_labels(vorbits.len(), arrows, vertex_labels, None).map(|qq| (qq, pi0, pi1))
}

/// Output of [`coset_quiver`]: the quiver, the left-translation action, and
/// for each vertex the chosen generator of its stabilizer (the conjugate of
/// the defining element), which witnesses the cyclic-stabilizer conditions.
#[derive(Debug, Clone)]
pub struct CosetQuiver {
    pub quiver: Quiver,
    pub action: QuiverAction,
    pub vertex_xi: Vec<usize>,
}

/// Builds the quiver whose `i`-th block of vertices is `G/<xi_i>`, with an
/// arrow per coset of `<xi_i> ∩ <xi_j>` from block `i` to block `j` whenever
/// `i < j` and `xi_i^{a_i/gcd} = xi_j^{a_j/gcd}`. `G` acts by left translation.
pub fn coset_quiver(g: &FinGroup, xis: &[usize]) -> CosetQuiver {
    let n = xis.len();
    let subgroups: Vec<Vec<usize>> = xis.iter().map(|&x| g.subgroup_generated(&[x])).collect();
    let orders: Vec<usize> = xis.iter().map(|&x| g.element_order(x)).collect();
    // Per block: coset reps and a map element -> coset index.
    let mut block_start = Vec::with_capacity(n);
    let mut vertex_of = Vec::with_capacity(n); // per block, element -> vertex id
    let mut num_vertices = 0usize;
    let mut vertex_labels = Vec::new();
    let mut vertex_xi = Vec::new();
    for i in 0..n {
        let reps = coset_reps(g, &subgroups[i], CosetSide::Left).expect("cyclic subgroup");
        block_start.push(num_vertices);
        let mut of = vec![0usize; g.order()];
        for (k, &r) in reps.iter().enumerate() {
            for &h in &subgroups[i] {
                of[g.mul(r, h)] = num_vertices + k;
            }
            vertex_labels.push(format!("({}H{},{})", g.label(r), i + 1, i + 1));
            // Stabilizer of the coset r<xi_i> under left translation is
            // r<xi_i>r^{-1}, generated by r xi_i r^{-1}.
            vertex_xi.push(g.mul(g.mul(r, xis[i]), g.inv(r)));
        }
        vertex_of.push(of);
        num_vertices += reps.len();
    }
    let mut arrows = Vec::new();
    let mut arrow_reps = Vec::new(); // coset rep element and the (i, j) pair
    for i in 0..n {
        for j in (i + 1)..n {
            let d = gcd(orders[i], orders[j]);
            if g.pow(xis[i], (orders[i] / d) as i64) != g.pow(xis[j], (orders[j] / d) as i64) {
                continue;
            }
            let inter: Vec<usize> = subgroups[i]
                .iter()
                .copied()
                .filter(|x| subgroups[j].contains(x))
                .collect();
            let reps = coset_reps(g, &inter, CosetSide::Left).expect("intersection subgroup");
            for &r in &reps {
                arrows.push((vertex_of[i][r], vertex_of[j][r]));
                arrow_reps.push((r, i, j, inter.clone()));
            }
        }
    }
    let quiver = Quiver::with_labels(num_vertices, arrows, Some(vertex_labels), None)
        .expect("coset quiver is acyclic by the block ordering");
    // Left translation action on vertices and arrows.
    let vertex_perms: Vec<Vec<usize>> = (0..g.order())
        .map(|x| {
            (0..num_vertices)
                .map(|v| {
                    let i = (0..n).rev().find(|&i| block_start[i] <= v).unwrap();
                    // Recover some element of the coset, translate, look up.
                    let rep = (0..g.order()).find(|&e| vertex_of[i][e] == v).unwrap();
                    vertex_of[i][g.mul(x, rep)]
                })
                .collect()
        })
        .collect();
    let arrow_perms: Vec<Vec<usize>> = (0..g.order())
        .map(|x| {
            (0..arrow_reps.len())
                .map(|a| {
                    let (r, i, j, _) = arrow_reps[a];
                    let moved = g.mul(x, r);
                    arrow_reps
                        .iter()
                        .position(|&(r2, i2, j2, ref inter2)| {
                            i2 == i
                                && j2 == j
                                && inter2.iter().any(|&h| g.mul(r2, h) == moved)
                        })
                        .expect("translated coset exists")
                })
                .collect()
        })
        .collect();
    let action = QuiverAction::new(&quiver, g.clone(), vertex_perms, arrow_perms)
        .expect("left translation is a quiver action");
    CosetQuiver { quiver, action, vertex_xi }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// The `2 -> 1 <- 3` quiver with the order-two action swapping the two
/// source vertices; the running example throughout the crate.
pub fn a3_with_swap() -> (Quiver, QuiverAction) {
    let q = Quiver::with_labels(
        3,
        vec![(1, 0), (2, 0)],
        Some(vec!["1".into(), "2".into(), "2'".into()]),
        Some(vec!["a".into(), "a'".into()]),
    )
    .unwrap();
    let act = QuiverAction::new(
        &q,
        FinGroup::cyclic(2),
        vec![vec![0, 1, 2], vec![0, 2, 1]],
        vec![vec![0, 1], vec![1, 0]],
    )
    .unwrap();
    (q, act)
}

/// The Kronecker quiver `1 ⇉ 2` with the order-two action swapping the two
/// parallel arrows; the standard counterexample to the stabilizer condition.
pub fn kronecker_with_swap() -> (Quiver, QuiverAction) {
    let q = Quiver::with_labels(
        2,
        vec![(0, 1), (0, 1)],
        Some(vec!["1".into(), "2".into()]),
        Some(vec!["a".into(), "b".into()]),
    )
    .unwrap();
    let act = QuiverAction::new(
        &q,
        FinGroup::cyclic(2),
        vec![vec![0, 1], vec![0, 1]],
        vec![vec![0, 1], vec![1, 0]],
    )
    .unwrap();
    (q, act)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_cycles() {
        assert_eq!(Quiver::new(2, vec![(0, 1), (1, 0)]).unwrap_err(), QuiverError::Cyclic);
        assert_eq!(Quiver::new(1, vec![(0, 0)]).unwrap_err(), QuiverError::Cyclic);
    }

    #[test]
    fn paths_in_a3() {
        let (q, _) = a3_with_swap();
        let ps = enumerate_paths(&q, VertexSel::At(1), VertexSel::At(0));
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].arrows, vec![0]);
        // A vertex to itself: exactly the trivial path.
        let triv = enumerate_paths(&q, VertexSel::At(0), VertexSel::At(0));
        assert_eq!(triv, vec![Path::trivial(0)]);
    }

    #[test]
    fn paths_in_a4_chain() {
        // 4 -> 3 -> 2 -> 1 as ids 3 -> 2 -> 1 -> 0.
        let q = Quiver::new(4, vec![(3, 2), (2, 1), (1, 0)]).unwrap();
        let all = enumerate_paths(&q, VertexSel::Any, VertexSel::Any);
        assert_eq!(all.len(), 10);
        let long = enumerate_paths(&q, VertexSel::At(3), VertexSel::At(0));
        assert_eq!(long.len(), 1);
        assert_eq!(long[0].len(), 3);
    }

    #[test]
    fn path_count_matches_adjacency_oracle() {
        // Sum of entries of A + A^2 + ... plus the number of vertices.
        let q = Quiver::new(4, vec![(3, 2), (2, 1), (1, 0), (3, 1)]).unwrap();
        let n = q.num_vertices();
        let mut a = vec![vec![0u64; n]; n];
        for &(s, t) in q.arrows() {
            a[s][t] += 1;
        }
        let mut total = n as u64;
        let mut power = a.clone();
        for _ in 0..n {
            total += power.iter().flatten().sum::<u64>();
            let mut next = vec![vec![0u64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        next[i][j] += power[i][k] * a[k][j];
                    }
                }
            }
            power = next;
        }
        let all = enumerate_paths(&q, VertexSel::Any, VertexSel::Any);
        assert_eq!(all.len() as u64, total);
    }

    #[test]
    fn quotient_of_a3_is_b2_shape() {
        let (q, act) = a3_with_swap();
        let (qq, pi0, pi1) = quotient_quiver(&q, &act).unwrap();
        assert_eq!(qq.num_vertices(), 2);
        assert_eq!(qq.num_arrows(), 1);
        assert_eq!(pi0, vec![0, 1, 1]);
        assert_eq!(pi1, vec![0, 0]);
        assert_eq!(qq.arrows()[0], (1, 0));
    }

    #[test]
    fn quotient_by_trivial_group_is_identity() {
        let (q, _) = a3_with_swap();
        let act = QuiverAction::trivial(&q, FinGroup::trivial());
        let (qq, pi0, pi1) = quotient_quiver(&q, &act).unwrap();
        assert_eq!(qq.num_vertices(), q.num_vertices());
        assert_eq!(qq.num_arrows(), q.num_arrows());
        assert_eq!(pi0, vec![0, 1, 2]);
        assert_eq!(pi1, vec![0, 1]);
    }

    #[test]
    fn quotient_of_kronecker() {
        let (q, act) = kronecker_with_swap();
        let (qq, _, _) = quotient_quiver(&q, &act).unwrap();
        assert_eq!(qq.num_vertices(), 2);
        assert_eq!(qq.num_arrows(), 1);
    }

    #[test]
    fn stabilizer_condition_flags() {
        let (q, act) = a3_with_swap();
        let rep = check_action(&q, &act);
        assert!(rep.is_valid());
        assert!(rep.stabilizer_condition);

        let (qk, actk) = kronecker_with_swap();
        let repk = check_action(&qk, &actk);
        assert!(repk.is_valid());
        assert!(!repk.stabilizer_condition);

        let triv = QuiverAction::trivial(&q, FinGroup::cyclic(2));
        let rept = check_action(&q, &triv);
        assert!(rept.is_valid());
        assert!(rept.stabilizer_condition);
    }

    #[test]
    fn coset_quiver_c2_recovers_a3_shape() {
        let g = FinGroup::cyclic(2);
        let cq = coset_quiver(&g, &[1, 0]);
        assert_eq!(cq.quiver.num_vertices(), 3);
        assert_eq!(cq.quiver.num_arrows(), 2);
        let rep = check_action(&cq.quiver, &cq.action);
        assert!(rep.is_valid());
        assert!(rep.stabilizer_condition);
    }

    #[test]
    fn coset_quiver_single_block_has_no_arrows() {
        let g = FinGroup::cyclic(4);
        let cq = coset_quiver(&g, &[1]);
        assert_eq!(cq.quiver.num_vertices(), 1);
        assert_eq!(cq.quiver.num_arrows(), 0);
    }

    #[test]
    fn coset_quiver_c4_mixed_orders() {
        let g = FinGroup::cyclic(4);
        let cq = coset_quiver(&g, &[1, 2]);
        // |G/H_1| = 1, |G/H_2| = 2, arrows = |G/(H_1 ∩ H_2)| = |G/H_2| = 2.
        assert_eq!(cq.quiver.num_vertices(), 3);
        assert_eq!(cq.quiver.num_arrows(), 2);
        let rep = check_action(&cq.quiver, &cq.action);
        assert!(rep.is_valid());
        assert!(rep.stabilizer_condition);
    }
}
