//! Finite groups given by full multiplication tables, their actions on finite
//! sets, coset decompositions, semidirect products, and finite bisets.
//!
//! Everything here is desk scale: groups are stored as dense tables so that
//! every law (associativity, action axioms, commuting biset actions) can be
//! checked exhaustively at construction time. Element `0` is always the
//! identity.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is not square or has out-of-range entries")]
    MalformedTable,
    #[error("element 0 is not a two-sided identity")]
    NoIdentity,
    #[error("multiplication table is not associative")]
    NotAssociative,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("the listed generators do not generate the group")]
    NotGenerating,
    #[error("the given set is not a subgroup")]
    NotASubgroup,
    #[error("phi({0}) is not a group automorphism")]
    NotAutomorphism(usize),
    #[error("action table is not a valid group action")]
    ActionInvalid,
    #[error("left and right biset actions do not commute")]
    ActionsDoNotCommute,
    #[error("right group of the left factor differs from left group of the right factor")]
    GroupMismatch,
}

/// Which side cosets are formed on in [`coset_reps`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetSide {
    /// Cosets `gH`.
    Left,
    /// Cosets `Hg`.
    Right,
}

/// A finite group with elements `0..order`, `0` being the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    generators: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FinGroup {
    /// Builds a group from an `n x n` multiplication table, checking all the
    /// group axioms and closure of the generator list.
    pub fn from_mul_table(
        table: &[Vec<usize>],
        generators: Vec<usize>,
        labels: Option<Vec<String>>,
    ) -> Result<FinGroup, GroupError> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n) {
            return Err(GroupError::MalformedTable);
        }
        let mut mul = vec![0usize; n * n];
        for (g, row) in table.iter().enumerate() {
            for (h, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(GroupError::MalformedTable);
                }
                mul[g * n + h] = v;
            }
        }
        for g in 0..n {
            if mul[g] != g || mul[g * n] != g {
                return Err(GroupError::NoIdentity);
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a * n + b] * n + c] != mul[a * n + mul[b * n + c]] {
                        return Err(GroupError::NotAssociative);
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for g in 0..n {
            for h in 0..n {
                if mul[g * n + h] == 0 && mul[h * n + g] == 0 {
                    inv[g] = h;
                    break;
                }
            }
            if inv[g] == usize::MAX {
                return Err(GroupError::NoInverse(g));
            }
        }
        let group = FinGroup { order: n, mul, inv, generators: generators.clone(), labels };
        if group.subgroup_generated(&generators).len() != n {
            return Err(GroupError::NotGenerating);
        }
        Ok(group)
    }

    /// The one-element group.
    pub fn trivial() -> FinGroup {
        FinGroup { order: 1, mul: vec![0], inv: vec![0], generators: vec![], labels: None }
    }

    /// The cyclic group of order `n`, with element `1` as the generator.
    pub fn cyclic(n: usize) -> FinGroup {
        assert!(n >= 1);
        let mut mul = vec![0usize; n * n];
        let mut inv = vec![0usize; n];
        for g in 0..n {
            for h in 0..n {
                mul[g * n + h] = (g + h) % n;
            }
            inv[g] = (n - g) % n;
        }
        let generators = if n > 1 { vec![1] } else { vec![] };
        FinGroup { order: n, mul, inv, generators, labels: None }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g * self.order + h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    /// `g^k` for any integer exponent.
    pub fn pow(&self, g: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(g) } else { g };
        let mut e = k.unsigned_abs();
        let mut acc = 0usize;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(ls) => ls[g].clone(),
            None => format!("g{g}"),
        }
    }

    /// The sorted subgroup generated by `gens`.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for &g in gens {
                for y in [self.mul(x, g), self.mul(x, self.inv(g))] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }

    /// Checks closure of `set` under multiplication and inverse (with identity).
    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        if !set.contains(&0) {
            return false;
        }
        let member = {
            let mut m = vec![false; self.order];
            for &x in set {
                if x >= self.order {
                    return false;
                }
                m[x] = true;
            }
            m
        };
        set.iter().all(|&a| {
            member[self.inv(a)] && set.iter().all(|&b| member[self.mul(a, b)])
        })
    }

    /// Returns the least generator if the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.order).find(|&g| self.element_order(g) == self.order)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Semidirect product `n ⋊ h` along `phi`, where `phi[x]` is the
    /// automorphism of `n` attached to the element `x` of `h`.
    /// Multiplication: `(a, g)(b, k) = (a · phi(g)(b), gk)`.
    pub fn semidirect(n: &FinGroup, h: &FinGroup, phi: &[Vec<usize>]) -> Result<FinGroup, GroupError> {
        if phi.len() != h.order() {
            return Err(GroupError::ActionInvalid);
        }
        for (x, f) in phi.iter().enumerate() {
            if !is_automorphism(n, f) {
                return Err(GroupError::NotAutomorphism(x));
            }
        }
        // phi must itself be a homomorphism h -> Aut(n).
        for x in 0..h.order() {
            for y in 0..h.order() {
                let xy = h.mul(x, y);
                for a in 0..n.order() {
                    if phi[xy][a] != phi[x][phi[y][a]] {
                        return Err(GroupError::ActionInvalid);
                    }
                }
            }
        }
        let no = n.order();
        let ho = h.order();
        let ord = no * ho;
        let idx = |a: usize, g: usize| a * ho + g;
        let mut mul = vec![0usize; ord * ord];
        for a in 0..no {
            for g in 0..ho {
                for b in 0..no {
                    for k in 0..ho {
                        let prod = idx(n.mul(a, phi[g][b]), h.mul(g, k));
                        mul[idx(a, g) * ord + idx(b, k)] = prod;
                    }
                }
            }
        }
        let mut inv = vec![0usize; ord];
        for a in 0..no {
            for g in 0..ho {
                let gi = h.inv(g);
                inv[idx(a, g)] = idx(phi[gi][n.inv(a)], gi);
            }
        }
        let labels = Some(
            (0..ord)
                .map(|e| format!("({},{})", n.label(e / ho), h.label(e % ho)))
                .collect(),
        );
        let generators: Vec<usize> = n
            .generators()
            .iter()
            .map(|&a| idx(a, 0))
            .chain(h.generators().iter().map(|&g| idx(0, g)))
            .collect();
        let generators = if ord == 1 { vec![] } else { generators };
        let g = FinGroup { order: ord, mul, inv, generators, labels };
        debug_assert!(g.verify().is_ok());
        Ok(g)
    }

    /// The subgroup on the given (sorted, identity-first) element set as a
    /// standalone group; element `k` of the result is `elems[k]`.
    pub fn subgroup_as_group(&self, elems: &[usize]) -> Result<FinGroup, GroupError> {
        if !self.is_subgroup(elems) || elems.windows(2).any(|w| w[0] >= w[1]) || elems[0] != 0 {
            return Err(GroupError::NotASubgroup);
        }
        let n = elems.len();
        let pos = |x: usize| elems.binary_search(&x).expect("closed under multiplication");
        let mut mul = vec![0usize; n * n];
        let mut inv = vec![0usize; n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = pos(self.mul(elems[i], elems[j]));
            }
            inv[i] = pos(self.inv(elems[i]));
        }
        let generators = if n > 1 { (1..n).collect() } else { vec![] };
        let labels = Some(elems.iter().map(|&e| self.label(e)).collect());
        Ok(FinGroup { order: n, mul, inv, generators, labels })
    }

    /// Re-runs the full axiom check; used by tests and semidirect debug assertions.
    pub fn verify(&self) -> Result<(), GroupError> {
        let n = self.order;
        for g in 0..n {
            if self.mul(0, g) != g || self.mul(g, 0) != g {
                return Err(GroupError::NoIdentity);
            }
            if self.mul(g, self.inv(g)) != 0 || self.mul(self.inv(g), g) != 0 {
                return Err(GroupError::NoInverse(g));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(GroupError::NotAssociative);
                    }
                }
            }
        }
        if self.subgroup_generated(&self.generators).len() != n {
            return Err(GroupError::NotGenerating);
        }
        Ok(())
    }
}

fn is_automorphism(g: &FinGroup, f: &[usize]) -> bool {
    if f.len() != g.order() {
        return false;
    }
    let mut seen = vec![false; g.order()];
    for &y in f {
        if y >= g.order() || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    if f[0] != 0 {
        return false;
    }
    (0..g.order()).all(|a| (0..g.order()).all(|b| f[g.mul(a, b)] == g.mul(f[a], f[b])))
}

/// Coset representatives of `subgroup` in `group`, least element first per
/// coset, so the identity is always the first representative.
pub fn coset_reps(group: &FinGroup, subgroup: &[usize], side: CosetSide) -> Result<Vec<usize>, GroupError> {
    if !group.is_subgroup(subgroup) {
        return Err(GroupError::NotASubgroup);
    }
    let mut covered = vec![false; group.order()];
    let mut reps = Vec::new();
    for g in 0..group.order() {
        if covered[g] {
            continue;
        }
        reps.push(g);
        for &h in subgroup {
            let x = match side {
                CosetSide::Left => group.mul(g, h),
                CosetSide::Right => group.mul(h, g),
            };
            covered[x] = true;
        }
    }
    Ok(reps)
}

/// A finite group acting on `{0..set_size}` by permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSetAction {
    pub group: FinGroup,
    pub set_size: usize,
    perm: Vec<Vec<usize>>,
}

impl GSetAction {
    pub fn new(group: FinGroup, set_size: usize, perm: Vec<Vec<usize>>) -> Result<GSetAction, GroupError> {
        let act = GSetAction { group, set_size, perm };
        act.validate()?;
        Ok(act)
    }

    pub fn trivial(group: FinGroup, set_size: usize) -> GSetAction {
        let perm = vec![(0..set_size).collect::<Vec<_>>(); group.order()];
        GSetAction { group, set_size, perm }
    }

    fn validate(&self) -> Result<(), GroupError> {
        if self.perm.len() != self.group.order() {
            return Err(GroupError::ActionInvalid);
        }
        for p in &self.perm {
            if p.len() != self.set_size {
                return Err(GroupError::ActionInvalid);
            }
            let mut seen = vec![false; self.set_size];
            for &x in p {
                if x >= self.set_size || seen[x] {
                    return Err(GroupError::ActionInvalid);
                }
                seen[x] = true;
            }
        }
        for x in 0..self.set_size {
            if self.perm[0][x] != x {
                return Err(GroupError::ActionInvalid);
            }
        }
        for g in 0..self.group.order() {
            for h in 0..self.group.order() {
                let gh = self.group.mul(g, h);
                for x in 0..self.set_size {
                    if self.perm[gh][x] != self.perm[g][self.perm[h][x]] {
                        return Err(GroupError::ActionInvalid);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.perm[g][x]
    }

    /// Orbit of `point` (sorted) and its stabilizer (sorted element set).
    /// The orbit–stabilizer identity `|orbit|·|stab| = |G|` holds by construction.
    pub fn orbit_stabilizer(&self, point: usize) -> (Vec<usize>, Vec<usize>) {
        assert!(point < self.set_size, "point out of range");
        let mut orbit = Vec::new();
        let mut stab = Vec::new();
        let mut in_orbit = vec![false; self.set_size];
        for g in 0..self.group.order() {
            let y = self.apply(g, point);
            if !in_orbit[y] {
                in_orbit[y] = true;
                orbit.push(y);
            }
            if y == point {
                stab.push(g);
            }
        }
        orbit.sort_unstable();
        (orbit, stab)
    }

    /// All orbits, each sorted, ordered by least member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.set_size];
        let mut out = Vec::new();
        for x in 0..self.set_size {
            if seen[x] {
                continue;
            }
            let (orb, _) = self.orbit_stabilizer(x);
            for &y in &orb {
                seen[y] = true;
            }
            out.push(orb);
        }
        out
    }
}

/// A finite `(left, right)`-biset: commuting left and right group actions on
/// `{0..size}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Biset {
    pub left: FinGroup,
    pub right: FinGroup,
    pub size: usize,
    left_act: Vec<Vec<usize>>,
    right_act: Vec<Vec<usize>>,
}

impl Biset {
    pub fn new(
        left: FinGroup,
        right: FinGroup,
        size: usize,
        left_act: Vec<Vec<usize>>,
        right_act: Vec<Vec<usize>>,
    ) -> Result<Biset, GroupError> {
        GSetAction::new(left.clone(), size, left_act.clone())?;
        // The right action of g is a left action of the opposite group; check
        // the axioms directly.
        if right_act.len() != right.order() {
            return Err(GroupError::ActionInvalid);
        }
        for p in &right_act {
            if p.len() != size {
                return Err(GroupError::ActionInvalid);
            }
            let mut seen = vec![false; size];
            for &x in p {
                if x >= size || seen[x] {
                    return Err(GroupError::ActionInvalid);
                }
                seen[x] = true;
            }
        }
        for x in 0..size {
            if right_act[0][x] != x {
                return Err(GroupError::ActionInvalid);
            }
        }
        for g in 0..right.order() {
            for h in 0..right.order() {
                let gh = right.mul(g, h);
                for x in 0..size {
                    // x.(gh) = (x.g).h
                    if right_act[gh][x] != right_act[h][right_act[g][x]] {
                        return Err(GroupError::ActionInvalid);
                    }
                }
            }
        }
        for g in 0..left.order() {
            for h in 0..right.order() {
                for x in 0..size {
                    if right_act[h][left_act[g][x]] != left_act[g][right_act[h][x]] {
                        return Err(GroupError::ActionsDoNotCommute);
                    }
                }
            }
        }
        Ok(Biset { left, right, size, left_act, right_act })
    }

    /// The one-element biset between trivial-acting groups.
    pub fn singleton(left: FinGroup, right: FinGroup) -> Biset {
        let left_act = vec![vec![0usize]; left.order()];
        let right_act = vec![vec![0usize]; right.order()];
        Biset { left, right, size: 1, left_act, right_act }
    }

    /// `G` as a `(G, G)`-biset under multiplication.
    pub fn regular(g: &FinGroup) -> Biset {
        let n = g.order();
        let left_act = (0..n).map(|a| (0..n).map(|x| g.mul(a, x)).collect()).collect();
        let right_act = (0..n).map(|a| (0..n).map(|x| g.mul(x, a)).collect()).collect();
        Biset { left: g.clone(), right: g.clone(), size: n, left_act, right_act }
    }

    /// `G` as a `(G, H)`-biset: left multiplication, right action through a
    /// homomorphism `phi: H -> G`.
    pub fn from_right_hom(g: &FinGroup, h: &FinGroup, phi: &[usize]) -> Result<Biset, GroupError> {
        let n = g.order();
        let left_act = (0..n).map(|a| (0..n).map(|x| g.mul(a, x)).collect()).collect();
        let right_act = (0..h.order())
            .map(|b| (0..n).map(|x| g.mul(x, phi[b])).collect())
            .collect();
        Biset::new(g.clone(), h.clone(), n, left_act, right_act)
    }

    /// `G` as an `(H, G)`-biset: right multiplication, left action through a
    /// homomorphism `phi: H -> G`.
    pub fn from_left_hom(h: &FinGroup, g: &FinGroup, phi: &[usize]) -> Result<Biset, GroupError> {
        let n = g.order();
        let left_act = (0..h.order())
            .map(|b| (0..n).map(|x| g.mul(phi[b], x)).collect())
            .collect();
        let right_act = (0..n).map(|a| (0..n).map(|x| g.mul(x, a)).collect()).collect();
        Biset::new(h.clone(), g.clone(), n, left_act, right_act)
    }

    pub fn left_apply(&self, g: usize, x: usize) -> usize {
        self.left_act[g][x]
    }

    pub fn right_apply(&self, x: usize, h: usize) -> usize {
        self.right_act[h][x]
    }
}

/// Result of a biset product: the product biset, the class of every pair, and
/// the canonical (lexicographically least) pair representing each class.
#[derive(Debug, Clone)]
pub struct BisetProduct {
    pub biset: Biset,
    pub class_of_pair: Vec<usize>,
    pub reps: Vec<(usize, usize)>,
}

/// The biset product `X ×_H Y`, classes computed by union–find over pairs
/// with the relation `(x.h, y) ~ (x, h.y)`.
pub fn biset_product(x: &Biset, y: &Biset) -> Result<BisetProduct, GroupError> {
    if x.right != y.left {
        return Err(GroupError::GroupMismatch);
    }
    let h = &x.right;
    let pairs = x.size * y.size;
    let idx = |a: usize, b: usize| a * y.size + b;
    let mut uf = UnionFind::new(pairs);
    for a in 0..x.size {
        for b in 0..y.size {
            for k in 0..h.order() {
                uf.union(idx(x.right_apply(a, k), b), idx(a, y.left_apply(k, b)));
            }
        }
    }
    // Canonical representative: lexicographically least pair in each class.
    let mut rep_of_root: Vec<Option<(usize, usize)>> = vec![None; pairs];
    for a in 0..x.size {
        for b in 0..y.size {
            let r = uf.find(idx(a, b));
            if rep_of_root[r].is_none() {
                rep_of_root[r] = Some((a, b));
            }
        }
    }
    let mut reps: Vec<(usize, usize)> = rep_of_root.iter().flatten().copied().collect();
    reps.sort_unstable();
    let mut class_of_pair = vec![0usize; pairs];
    for a in 0..x.size {
        for b in 0..y.size {
            let rep = rep_of_root[uf.find(idx(a, b))].unwrap();
            class_of_pair[idx(a, b)] = reps.binary_search(&rep).unwrap();
        }
    }
    let size = reps.len();
    let left_act = (0..x.left.order())
        .map(|g| {
            (0..size)
                .map(|c| {
                    let (a, b) = reps[c];
                    class_of_pair[idx(x.left_apply(g, a), b)]
                })
                .collect()
        })
        .collect();
    let right_act = (0..y.right.order())
        .map(|k| {
            (0..size)
                .map(|c| {
                    let (a, b) = reps[c];
                    class_of_pair[idx(a, y.right_apply(b, k))]
                })
                .collect()
        })
        .collect();
    let biset = Biset::new(x.left.clone(), y.right.clone(), size, left_act, right_act)?;
    Ok(BisetProduct { biset, class_of_pair, reps })
}

/// Plain union–find with path compression.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // Keep the smaller root so canonical scans stay order-stable.
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2_swap_on_4() -> GSetAction {
        // C2 swapping {2,3} inside a 4-point set.
        let g = FinGroup::cyclic(2);
        GSetAction::new(g, 4, vec![vec![0, 1, 2, 3], vec![0, 1, 3, 2]]).unwrap()
    }

    #[test]
    fn orbit_stabilizer_c2_swap() {
        let act = c2_swap_on_4();
        let (orbit, stab) = act.orbit_stabilizer(2);
        assert_eq!(orbit, vec![2, 3]);
        assert_eq!(stab, vec![0]);
        assert_eq!(orbit.len() * stab.len(), act.group.order());
    }

    #[test]
    fn orbit_stabilizer_trivial_action() {
        let g = FinGroup::cyclic(3);
        let act = GSetAction::trivial(g, 5);
        let (orbit, stab) = act.orbit_stabilizer(4);
        assert_eq!(orbit, vec![4]);
        assert_eq!(stab.len(), 3);
    }

    #[test]
    fn orbit_stabilizer_c4_regular() {
        let g = FinGroup::cyclic(4);
        let perm = (0..4).map(|k| (0..4).map(|x| (x + k) % 4).collect()).collect();
        let act = GSetAction::new(g, 4, perm).unwrap();
        let (orbit, stab) = act.orbit_stabilizer(0);
        assert_eq!(orbit.len(), 4);
        assert_eq!(stab, vec![0]);
        assert_eq!(orbit.len() * stab.len(), 4);
    }

    #[test]
    fn coset_reps_edge_cases() {
        let c2 = FinGroup::cyclic(2);
        assert_eq!(coset_reps(&c2, &[0, 1], CosetSide::Left).unwrap(), vec![0]);
        assert_eq!(coset_reps(&c2, &[0], CosetSide::Left).unwrap(), vec![0, 1]);
        let c4 = FinGroup::cyclic(4);
        let reps = coset_reps(&c4, &[0, 2], CosetSide::Right).unwrap();
        assert_eq!(reps.len(), 2);
        assert_eq!(reps[0], 0);
        // The two cosets partition C4.
        let mut all: Vec<usize> = reps
            .iter()
            .flat_map(|&r| [0usize, 2].map(|h| c4.mul(h, r)))
            .collect();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3]);
    }

    #[test]
    fn coset_reps_rejects_non_subgroup() {
        let c4 = FinGroup::cyclic(4);
        assert_eq!(
            coset_reps(&c4, &[0, 1], CosetSide::Left).unwrap_err(),
            GroupError::NotASubgroup
        );
    }

    #[test]
    fn semidirect_trivial_phi_is_direct_product() {
        let c2 = FinGroup::cyclic(2);
        let phi = vec![vec![0, 1]; 2];
        let g = FinGroup::semidirect(&c2, &c2, &phi).unwrap();
        assert_eq!(g.order(), 4);
        // Klein four group: every element squares to the identity.
        for x in 0..4 {
            assert_eq!(g.mul(x, x), 0);
        }
    }

    #[test]
    fn semidirect_with_trivial_normal_part() {
        let triv = FinGroup::trivial();
        let c3 = FinGroup::cyclic(3);
        let phi = vec![vec![0]; 3];
        let g = FinGroup::semidirect(&triv, &c3, &phi).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.element_order(1), 3);
    }

    #[test]
    fn semidirect_c3_by_inversion_is_nonabelian() {
        let c3 = FinGroup::cyclic(3);
        let c2 = FinGroup::cyclic(2);
        let phi = vec![vec![0, 1, 2], vec![0, 2, 1]];
        let g = FinGroup::semidirect(&c3, &c2, &phi).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert!(g.verify().is_ok());
    }

    #[test]
    fn semidirect_rejects_non_automorphism() {
        let c3 = FinGroup::cyclic(3);
        let c2 = FinGroup::cyclic(2);
        let phi = vec![vec![0, 1, 2], vec![0, 0, 1]];
        assert!(matches!(
            FinGroup::semidirect(&c3, &c2, &phi),
            Err(GroupError::NotAutomorphism(1))
        ));
    }

    #[test]
    fn biset_product_unit() {
        // X = H as (H,H)-biset, Y arbitrary: X x_H Y has |Y| classes.
        let h = FinGroup::cyclic(2);
        let x = Biset::regular(&h);
        let y = Biset::from_left_hom(&h, &FinGroup::cyclic(4), &[0, 2]).unwrap();
        let p = biset_product(&x, &y).unwrap();
        assert_eq!(p.biset.size, y.size);
    }

    #[test]
    fn biset_product_regular_over_index_two() {
        // G x_H G with |G| = 4, |H| = 2 has 4*4/2 = 8 classes.
        let g = FinGroup::cyclic(4);
        let h = FinGroup::cyclic(2);
        // H -> G sending the generator to sigma^2.
        let right = Biset::from_right_hom(&g, &h, &[0, 2]).unwrap();
        let left = Biset::from_left_hom(&h, &g, &[0, 2]).unwrap();
        let p = biset_product(&right, &left).unwrap();
        assert_eq!(p.biset.size, 8);
    }

    #[test]
    fn biset_identity_acts_trivially() {
        let g = FinGroup::cyclic(4);
        let b = Biset::regular(&g);
        for x in 0..b.size {
            assert_eq!(b.left_apply(0, x), x);
            assert_eq!(b.right_apply(x, 0), x);
        }
    }

    #[test]
    fn group_from_table_rejects_bad_tables() {
        // Non-associative magma on 3 elements.
        let t = vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 0, 1]];
        assert!(FinGroup::from_mul_table(&t, vec![1], None).is_err());
    }

    #[test]
    fn from_table_accepts_klein_four() {
        let t = vec![
            vec![0, 1, 2, 3],
            vec![1, 0, 3, 2],
            vec![2, 3, 0, 1],
            vec![3, 2, 1, 0],
        ];
        let g = FinGroup::from_mul_table(&t, vec![1, 2], None).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.cyclic_generator().is_none());
        assert_eq!(
            FinGroup::from_mul_table(&t, vec![1], None).unwrap_err(),
            GroupError::NotGenerating
        );
    }
}
