//! Minimal projective presentations over presented algebras, the transpose,
//! vector-space duality, and the Auslander-Reiten translations built from
//! them.

use super::AlgModule;
use crate::algkit::{lin_single, FpMat, Lin, PresentedAlgebra, RowSpace, StructAlgebra};

/// Columns spanning `rad(A)·M`.
fn radical_subspace(pa: &PresentedAlgebra, m: &AlgModule) -> FpMat {
    let f = pa.alg.field;
    let mut space = RowSpace::new(f, m.dim);
    let mut cols = Vec::new();
    for b in pa.radical_basis() {
        for j in 0..m.dim {
            let v = m.action[b].col(j);
            if space.insert(&v) {
                cols.push(v);
            }
        }
    }
    let mut out = FpMat::zeros(f, m.dim, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for i in 0..m.dim {
            out.set(i, j, c[i]);
        }
    }
    out
}

/// Vertex-indexed lifts of a basis of the top `M/rad·M`, scanning the
/// idempotent images in vertex order for determinism.
fn top_lifts(pa: &PresentedAlgebra, m: &AlgModule) -> Vec<(usize, Vec<u64>)> {
    let f = pa.alg.field;
    let rad = radical_subspace(pa, m);
    let mut space = RowSpace::new(f, m.dim);
    for j in 0..rad.cols {
        space.insert(&rad.col(j));
    }
    let mut lifts = Vec::new();
    for v in 0..pa.num_vertices {
        let e = pa.vertex_idem[v];
        for j in 0..m.dim {
            let col = m.action[e].col(j);
            if space.insert(&col) {
                lifts.push((v, col));
            }
        }
    }
    lifts
}

/// The projective `A·e_v` as a module, with its algebra-basis index list.
pub fn projective_module(pa: &PresentedAlgebra, v: usize) -> (AlgModule, Vec<usize>) {
    let f = pa.alg.field;
    let basis = pa.projective_basis(v);
    let pos: Vec<Option<usize>> = {
        let mut p = vec![None; pa.alg.dim];
        for (k, &b) in basis.iter().enumerate() {
            p[b] = Some(k);
        }
        p
    };
    let action: Vec<FpMat> = (0..pa.alg.dim)
        .map(|a| {
            let mut mat = FpMat::zeros(f, basis.len(), basis.len());
            for (k, &b) in basis.iter().enumerate() {
                for &(r, c) in pa.alg.mul_basis(a, b) {
                    let rk = pos[r].expect("products stay inside the projective");
                    mat.set(rk, k, c);
                }
            }
            mat
        })
        .collect();
    (AlgModule { dim: basis.len(), action }, basis)
}

/// A minimal projective presentation `P1 -> P0 -> M -> 0`.
#[derive(Debug, Clone)]
pub struct Presentation {
    /// Vertices of the summands of `P0` and `P1`.
    pub p0_vertices: Vec<usize>,
    pub p1_vertices: Vec<usize>,
    /// Per summand of `P0`/`P1`, the algebra-basis indices of its monomials.
    pub p0_basis: Vec<Vec<usize>>,
    pub p1_basis: Vec<Vec<usize>>,
    /// The algebra coefficient of the map at `(u, v)`, an element of
    /// `e_{i_u}·A·e_{j_v}`.
    pub coeffs: Vec<Vec<Lin>>,
    /// The cover `P0 -> M` over the field.
    pub cover: FpMat,
}

/// Builds the direct sum of the projectives at the given vertices, returning
/// the module, the summand basis lists and the summand offsets.
fn projective_sum(
    pa: &PresentedAlgebra,
    vertices: &[usize],
) -> (AlgModule, Vec<Vec<usize>>, Vec<usize>) {
    let f = pa.alg.field;
    let parts: Vec<(AlgModule, Vec<usize>)> =
        vertices.iter().map(|&v| projective_module(pa, v)).collect();
    let mut offsets = Vec::with_capacity(parts.len());
    let mut total = 0;
    for (m, _) in &parts {
        offsets.push(total);
        total += m.dim;
    }
    let action: Vec<FpMat> = (0..pa.alg.dim)
        .map(|a| {
            let mut mat = FpMat::zeros(f, total, total);
            for ((m, _), &off) in parts.iter().zip(offsets.iter()) {
                for i in 0..m.dim {
                    for j in 0..m.dim {
                        let v = m.action[a].get(i, j);
                        if v != 0 {
                            mat.set(off + i, off + j, v);
                        }
                    }
                }
            }
            mat
        })
        .collect();
    let basis_lists = parts.into_iter().map(|(_, b)| b).collect();
    (AlgModule { dim: total, action }, basis_lists, offsets)
}

/// Minimal projective presentation via two successive projective covers.
pub fn min_projective_presentation(pa: &PresentedAlgebra, m: &AlgModule) -> Presentation {
    let f = pa.alg.field;
    let lifts = top_lifts(pa, m);
    let p0_vertices: Vec<usize> = lifts.iter().map(|&(v, _)| v).collect();
    let (p0, p0_basis, p0_offsets) = projective_sum(pa, &p0_vertices);
    // Cover P0 -> M: monomial b in summand t maps to b·lift_t.
    let mut cover = FpMat::zeros(f, m.dim, p0.dim);
    for (t, (_, lift)) in lifts.iter().enumerate() {
        for (k, &b) in p0_basis[t].iter().enumerate() {
            let img = m.action[b].mul_vec(lift);
            for (r, &c) in img.iter().enumerate() {
                cover.set(r, p0_offsets[t] + k, c);
            }
        }
    }
    debug_assert_eq!(cover.rank(), m.dim, "projective cover must be surjective");
    // Kernel of the cover, as a submodule of P0.
    let ker = cover.kernel_basis();
    let mut kbasis = FpMat::zeros(f, p0.dim, ker.len());
    for (j, v) in ker.iter().enumerate() {
        for i in 0..p0.dim {
            kbasis.set(i, j, v[i]);
        }
    }
    if ker.is_empty() {
        return Presentation {
            p0_vertices,
            p1_vertices: vec![],
            p0_basis,
            p1_basis: vec![],
            coeffs: vec![],
            cover,
        };
    }
    let kmod = p0.restrict(&pa.alg, &kbasis).expect("kernel is a submodule");
    let klifts = top_lifts(pa, &kmod);
    let p1_vertices: Vec<usize> = klifts.iter().map(|&(v, _)| v).collect();
    let (_, p1_basis, _) = projective_sum(pa, &p1_vertices);
    // Generator images back in P0 coordinates, split per summand of P0.
    let mut coeffs = Vec::with_capacity(klifts.len());
    for (_, loc) in &klifts {
        let in_p0 = kbasis.mul_vec(loc);
        let row: Vec<Lin> = (0..p0_vertices.len())
            .map(|v| {
                let mut terms = Vec::new();
                for (k, &b) in p0_basis[v].iter().enumerate() {
                    let c = in_p0[p0_offsets[v] + k];
                    if c != 0 {
                        terms.push((b, c));
                    }
                }
                crate::algkit::lin_normalize(f, terms)
            })
            .collect();
        coeffs.push(row);
    }
    Presentation { p0_vertices, p1_vertices, p0_basis, p1_basis, coeffs, cover }
}

/// The transpose: cokernel of the dualized presentation map, a module over
/// the opposite algebra.
pub fn transpose(pa: &PresentedAlgebra, m: &AlgModule) -> AlgModule {
    let op = pa.opposite();
    transpose_with(pa, &op, m)
}

fn transpose_with(pa: &PresentedAlgebra, op: &PresentedAlgebra, m: &AlgModule) -> AlgModule {
    if m.is_zero() {
        return AlgModule::zero(&op.alg);
    }
    let f = pa.alg.field;
    let pres = min_projective_presentation(pa, m);
    if pres.p1_vertices.is_empty() {
        // Projective module: zero transpose.
        return AlgModule::zero(&op.alg);
    }
    // Dual projectives swap source and target.
    let (p1_op, p1_op_basis, p1_op_offsets) = projective_sum(op, &pres.p1_vertices);
    let (_, p0_op_basis, p0_op_offsets) = projective_sum(op, &pres.p0_vertices);
    let p0_op_dim: usize =
        p0_op_basis.iter().map(|b| b.len()).sum();
    // The dualized map sends (y_v)_v to (sum_v a_{uv}·y_v)_u, products in the
    // original algebra.
    let mut dual_map = FpMat::zeros(f, p1_op.dim, p0_op_dim);
    for (v, ys) in p0_op_basis.iter().enumerate() {
        for (kj, &y) in ys.iter().enumerate() {
            let col = p0_op_offsets[v] + kj;
            for u in 0..pres.p1_vertices.len() {
                let prod = pa.alg.mul_lin(&pres.coeffs[u][v], &lin_single(y));
                for &(r, c) in &prod {
                    let rk = p1_op_basis[u]
                        .iter()
                        .position(|&b| b == r)
                        .expect("product lands in the dual projective");
                    dual_map.set(p1_op_offsets[u] + rk, col, c);
                }
            }
        }
    }
    // Cokernel of the image inside P1^op.
    let mut space = RowSpace::new(f, p1_op.dim);
    let mut cols = Vec::new();
    for j in 0..p0_op_dim {
        let v = dual_map.col(j);
        if space.insert(&v) {
            cols.push(v);
        }
    }
    let mut img = FpMat::zeros(f, p1_op.dim, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for i in 0..p1_op.dim {
            img.set(i, j, c[i]);
        }
    }
    p1_op.quotient(&op.alg, &img).expect("image of a module map is a submodule")
}

/// Vector-space dual: a module over the opposite algebra with transposed
/// action matrices.
pub fn dual(alg: &StructAlgebra, m: &AlgModule) -> AlgModule {
    let _ = alg;
    AlgModule { dim: m.dim, action: m.action.iter().map(|a| a.transpose()).collect() }
}

/// The Auslander-Reiten translation `D Tr`.
pub fn tau(pa: &PresentedAlgebra, m: &AlgModule) -> AlgModule {
    let tr = transpose(pa, m);
    dual(&pa.alg, &tr)
}

/// The inverse translation `Tr D`.
pub fn tau_minus(pa: &PresentedAlgebra, m: &AlgModule) -> AlgModule {
    let op = pa.opposite();
    let dm = dual(&pa.alg, m);
    transpose_with(&op, pa, &dm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algkit::{algebra_h, path_algebra, Fp};
    use crate::cartan::CartanTriple;
    use crate::quiver::a3_with_swap;
    use crate::repmod::dim_vector;

    fn f2() -> Fp {
        Fp::new(2)
    }

    fn simple_at(pa: &PresentedAlgebra, v: usize) -> AlgModule {
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
    fn tau_of_projective_vanishes() {
        let (q, _) = a3_with_swap();
        let pa = path_algebra(&q, f2());
        // Vertex 1 (the sink) has a simple projective.
        let s1 = simple_at(&pa.pa, 0);
        assert!(tau(&pa.pa, &s1).is_zero());
        let (p2, _) = projective_module(&pa.pa, 1);
        assert!(tau(&pa.pa, &p2).is_zero());
    }

    #[test]
    fn tau_of_s2_in_a3() {
        let (q, _) = a3_with_swap();
        let pa = path_algebra(&q, f2());
        let s2 = simple_at(&pa.pa, 1);
        let t = tau(&pa.pa, &s2);
        assert_eq!(t.dim, 2);
        // The translate is supported on the other arm.
        assert_eq!(dim_vector(&pa.pa, &t), vec![1, 0, 1]);
    }

    #[test]
    fn tau_minus_inverts_tau_on_dimensions() {
        let (q, _) = a3_with_swap();
        let pa = path_algebra(&q, f2());
        let s2 = simple_at(&pa.pa, 1);
        let t = tau(&pa.pa, &s2);
        let back = tau_minus(&pa.pa, &t);
        assert_eq!(dim_vector(&pa.pa, &back), dim_vector(&pa.pa, &s2));
    }

    #[test]
    fn tau_on_h_simple_at_thin_vertex() {
        let h = algebra_h(&CartanTriple::b2(), f2()).unwrap();
        let s2 = simple_at(&h.pa, 1);
        let t = tau(&h.pa, &s2);
        assert_eq!(dim_vector(&h.pa, &t), vec![2, 1]);
    }

    #[test]
    fn presentation_of_simple_has_radical_kernel() {
        let (q, _) = a3_with_swap();
        let pa = path_algebra(&q, f2());
        let s2 = simple_at(&pa.pa, 1);
        let pres = min_projective_presentation(&pa.pa, &s2);
        assert_eq!(pres.p0_vertices, vec![1]);
        assert_eq!(pres.p1_vertices, vec![0]);
    }

    #[test]
    fn dual_is_involutive_on_matrices() {
        let (q, _) = a3_with_swap();
        let pa = path_algebra(&q, f2());
        let s2 = simple_at(&pa.pa, 1);
        let dd = dual(&pa.pa.alg, &dual(&pa.pa.alg, &s2));
        assert_eq!(dd, s2);
    }
}
