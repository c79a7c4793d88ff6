//! Quiver representations, reflection functors at sinks and sources, and the
//! construction of the indecomposable representation with a prescribed
//! positive root as dimension vector.

use super::AlgModule;
use crate::algkit::{Fp, FpMat, PathAlgebra, RowSpace};
use crate::quiver::Quiver;
use crate::rootfold::{positive_roots, RootLattice, RootVector};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReflectError {
    #[error("vertex {0} is not a sink")]
    NotSink(usize),
    #[error("vertex {0} is not a source")]
    NotSource(usize),
    #[error("{0:?} is not a positive root of the quiver")]
    RootNotPositive(Vec<i64>),
    #[error("the reflection sequence did not terminate; the quiver is not of finite type")]
    NotFiniteType,
}

/// A representation: a vector space dimension per vertex and a matrix per
/// arrow (target-dimension by source-dimension).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverRep {
    pub field: Fp,
    pub dims: Vec<usize>,
    pub mats: Vec<FpMat>,
}

impl QuiverRep {
    pub fn new(q: &Quiver, field: Fp, dims: Vec<usize>, mats: Vec<FpMat>) -> QuiverRep {
        assert_eq!(dims.len(), q.num_vertices());
        assert_eq!(mats.len(), q.num_arrows());
        for a in 0..q.num_arrows() {
            assert_eq!(mats[a].rows, dims[q.dst(a)], "arrow {a} codomain");
            assert_eq!(mats[a].cols, dims[q.src(a)], "arrow {a} domain");
        }
        QuiverRep { field, dims, mats }
    }

    pub fn simple(q: &Quiver, field: Fp, v: usize) -> QuiverRep {
        let mut dims = vec![0; q.num_vertices()];
        dims[v] = 1;
        let mats = (0..q.num_arrows())
            .map(|a| FpMat::zeros(field, dims[q.dst(a)], dims[q.src(a)]))
            .collect();
        QuiverRep { field, dims, mats }
    }

    pub fn dim_vector(&self) -> RootVector {
        RootVector(self.dims.iter().map(|&d| d as i64).collect())
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// The corresponding module over the path algebra: vertex blocks in
    /// vertex order, path basis elements act by products of arrow matrices.
    pub fn to_module(&self, path: &PathAlgebra) -> AlgModule {
        let f = self.field;
        let total = self.total_dim();
        let offset: Vec<usize> = {
            let mut acc = 0;
            let mut out = Vec::new();
            for &d in &self.dims {
                out.push(acc);
                acc += d;
            }
            out
        };
        let action: Vec<FpMat> = path
            .paths
            .iter()
            .map(|p| {
                let mut block = FpMat::identity(f, self.dims[p.source]);
                for &a in &p.arrows {
                    block = self.mats[a].matmul(&block);
                }
                let mut out = FpMat::zeros(f, total, total);
                for i in 0..block.rows {
                    for j in 0..block.cols {
                        let v = block.get(i, j);
                        if v != 0 {
                            out.set(offset[p.target] + i, offset[p.source] + j, v);
                        }
                    }
                }
                out
            })
            .collect();
        AlgModule { dim: total, action }
    }
}

/// The reflection functor at a sink: replaces the space there by the kernel
/// of the sum map from the in-neighbours, reversing the incident arrows.
pub fn reflect_plus(q: &Quiver, rep: &QuiverRep, v: usize) -> Result<(Quiver, QuiverRep), ReflectError> {
    if !q.is_sink(v) {
        return Err(ReflectError::NotSink(v));
    }
    let f = rep.field;
    let incoming = q.arrows_into(v);
    let src_dims: Vec<usize> = incoming.iter().map(|&a| rep.dims[q.src(a)]).collect();
    let total: usize = src_dims.iter().sum();
    // Sum map ⊕ M(src a) -> M(v).
    let mut phi = FpMat::zeros(f, rep.dims[v], total);
    let mut off = 0;
    for (k, &a) in incoming.iter().enumerate() {
        for i in 0..rep.mats[a].rows {
            for j in 0..rep.mats[a].cols {
                phi.set(i, off + j, rep.mats[a].get(i, j));
            }
        }
        off += src_dims[k];
    }
    let kernel = phi.kernel_basis();
    let newdim = kernel.len();
    let reflected = q.reflect_at(v);
    let mut dims = rep.dims.clone();
    dims[v] = newdim;
    let mats: Vec<FpMat> = (0..q.num_arrows())
        .map(|a| {
            if let Some(k) = incoming.iter().position(|&b| b == a) {
                // Now v -> src(a): project the kernel onto the a-component.
                let off: usize = src_dims[..k].iter().sum();
                let mut m = FpMat::zeros(f, src_dims[k], newdim);
                for (col, vec) in kernel.iter().enumerate() {
                    for i in 0..src_dims[k] {
                        m.set(i, col, vec[off + i]);
                    }
                }
                m
            } else {
                rep.mats[a].clone()
            }
        })
        .collect();
    Ok((reflected.clone(), QuiverRep::new(&reflected, f, dims, mats)))
}

/// The reflection functor at a source: replaces the space there by the
/// cokernel of the sum map into the out-neighbours.
pub fn reflect_minus(q: &Quiver, rep: &QuiverRep, v: usize) -> Result<(Quiver, QuiverRep), ReflectError> {
    if !q.is_source(v) {
        return Err(ReflectError::NotSource(v));
    }
    let f = rep.field;
    let outgoing = q.arrows_from(v);
    let dst_dims: Vec<usize> = outgoing.iter().map(|&a| rep.dims[q.dst(a)]).collect();
    let total: usize = dst_dims.iter().sum();
    // Stacked map M(v) -> ⊕ M(dst a).
    let mut psi = FpMat::zeros(f, total, rep.dims[v]);
    let mut off = 0;
    for (k, &a) in outgoing.iter().enumerate() {
        for i in 0..rep.mats[a].rows {
            for j in 0..rep.mats[a].cols {
                psi.set(off + i, j, rep.mats[a].get(i, j));
            }
        }
        off += dst_dims[k];
    }
    // Cokernel: complete the image to the full space, project onto the rest.
    let mut space = RowSpace::new(f, total);
    let mut cols: Vec<Vec<u64>> = Vec::new();
    for j in 0..psi.cols {
        let col = psi.col(j);
        if space.insert(&col) {
            cols.push(col);
        }
    }
    let rank = cols.len();
    for j in 0..total {
        let mut e = vec![0u64; total];
        e[j] = 1;
        if space.insert(&e) {
            cols.push(e);
        }
    }
    let mut p = FpMat::zeros(f, total, total);
    for (j, c) in cols.iter().enumerate() {
        for i in 0..total {
            p.set(i, j, c[i]);
        }
    }
    let pinv = p.inverse().expect("completed basis is invertible");
    let newdim = total - rank;
    // Projection = last rows of the inverse change of basis.
    let mut proj = FpMat::zeros(f, newdim, total);
    for i in 0..newdim {
        for j in 0..total {
            proj.set(i, j, pinv.get(rank + i, j));
        }
    }
    let reflected = q.reflect_at(v);
    let mut dims = rep.dims.clone();
    dims[v] = newdim;
    let mats: Vec<FpMat> = (0..q.num_arrows())
        .map(|a| {
            if let Some(k) = outgoing.iter().position(|&b| b == a) {
                // Now dst(a) -> v: include the block, then project.
                let off: usize = dst_dims[..k].iter().sum();
                let mut incl = FpMat::zeros(f, total, dst_dims[k]);
                for i in 0..dst_dims[k] {
                    incl.set(off + i, i, 1);
                }
                proj.matmul(&incl)
            } else {
                rep.mats[a].clone()
            }
        })
        .collect();
    Ok((reflected.clone(), QuiverRep::new(&reflected, f, dims, mats)))
}

/// Builds the indecomposable representation with the given positive root as
/// dimension vector, by reducing the root along an admissible sink sequence
/// and rebuilding with the inverse reflection functors.
pub fn indecomposable_for_root(
    q: &Quiver,
    field: Fp,
    root: &RootVector,
) -> Result<QuiverRep, ReflectError> {
    let lat = RootLattice::simply_laced(q);
    let pos = positive_roots(&lat, 120);
    if pos.cap_reached {
        return Err(ReflectError::NotFiniteType);
    }
    if !pos.contains(root) {
        return Err(ReflectError::RootNotPositive(root.0.clone()));
    }
    // Admissible sink sequence: reverse topological order, repeated.
    let order: Vec<usize> = {
        let mut o = q.topo_order().expect("acyclic");
        o.reverse();
        o
    };
    let mut beta = root.clone();
    let mut quiver = q.clone();
    let mut steps: Vec<(Quiver, usize)> = Vec::new();
    let limit = 4 * order.len() * (root.height().unsigned_abs() as usize + 2);
    let mut round = 0;
    loop {
        if round * order.len() > limit {
            return Err(ReflectError::NotFiniteType);
        }
        round += 1;
        for &v in &order {
            debug_assert!(quiver.is_sink(v), "sequence must visit sinks");
            let image = lat.reflect(v, &beta);
            if !image.is_positive() {
                // A positive root killed by a simple reflection is simple.
                debug_assert_eq!(beta, RootVector::simple(q.num_vertices(), v));
                let mut rep = QuiverRep::simple(&quiver, field, v);
                let mut cur = quiver.clone();
                for (prev_q, w) in steps.iter().rev() {
                    let (back, r) = reflect_minus(&cur, &rep, *w)?;
                    debug_assert_eq!(&back, prev_q);
                    rep = r;
                    cur = back;
                }
                debug_assert_eq!(rep.dim_vector(), *root);
                return Ok(rep);
            }
            steps.push((quiver.clone(), v));
            quiver = quiver.reflect_at(v);
            beta = image;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::a3_with_swap;

    fn f2() -> Fp {
        Fp::new(2)
    }

    #[test]
    fn simple_roots_give_simples() {
        let (q, _) = a3_with_swap();
        for v in 0..3 {
            let rep =
                indecomposable_for_root(&q, f2(), &RootVector::simple(3, v)).unwrap();
            assert_eq!(rep.dim_vector(), RootVector::simple(3, v));
        }
    }

    #[test]
    fn full_root_gives_full_rank_arrows() {
        let (q, _) = a3_with_swap();
        let rep = indecomposable_for_root(&q, f2(), &RootVector(vec![1, 1, 1])).unwrap();
        assert_eq!(rep.dims, vec![1, 1, 1]);
        for a in 0..2 {
            assert_eq!(rep.mats[a].rank(), 1, "arrow {a} must be nonzero");
        }
    }

    #[test]
    fn all_six_roots_realized() {
        let (q, _) = a3_with_swap();
        let lat = RootLattice::simply_laced(&q);
        let roots = positive_roots(&lat, 60);
        assert_eq!(roots.roots.len(), 6);
        for r in &roots.roots {
            let rep = indecomposable_for_root(&q, f2(), r).unwrap();
            assert_eq!(&rep.dim_vector(), r);
        }
    }

    #[test]
    fn non_root_is_rejected() {
        let (q, _) = a3_with_swap();
        assert!(matches!(
            indecomposable_for_root(&q, f2(), &RootVector(vec![2, 0, 0])),
            Err(ReflectError::RootNotPositive(_))
        ));
    }

    #[test]
    fn reflect_guards_check_orientation() {
        let (q, _) = a3_with_swap();
        let rep = QuiverRep::simple(&q, f2(), 0);
        // Vertex 1 (id 0) is the sink; vertex 2 (id 1) is a source.
        assert!(matches!(reflect_plus(&q, &rep, 1), Err(ReflectError::NotSink(1))));
        assert!(matches!(reflect_minus(&q, &rep, 0), Err(ReflectError::NotSource(0))));
    }

    #[test]
    fn reflection_roundtrip_preserves_dims() {
        let (q, _) = a3_with_swap();
        let rep = indecomposable_for_root(&q, f2(), &RootVector(vec![1, 1, 1])).unwrap();
        let (q2, plus) = reflect_plus(&q, &rep, 0).unwrap();
        assert_eq!(plus.dims, vec![1, 1, 1]);
        let (q3, back) = reflect_minus(&q2, &plus, 0).unwrap();
        assert_eq!(q3, q);
        assert_eq!(back.dims, rep.dims);
    }
}
