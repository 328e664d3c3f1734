//! Projective, simple and injective modules, free modules on lists of
//! generators, and maps out of them.

use std::cmp::min;

use crate::algebra::GradedAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::module::{shapes_of, GradedModule, ModuleMap};

/// Which canonical module to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Canonical {
    Projective,
    Simple,
    Injective,
}

/// `P(v)<-g>` (generated in degree `g`), stored up to degree `hi`.
pub fn projective(a: &GradedAlgebra, v: usize, g: i64, hi: i64) -> GradedModule {
    let field = a.field();
    let n = a.nverts();
    let shape = shapes_of(&a.presentation);
    if hi < g {
        return GradedModule::zero(field, n, shape).rewindow(g, g - 1, true, false);
    }
    assert!((hi - g) as usize <= a.depth, "algebra depth {} too small for degree {}", a.depth, hi - g);
    let dims: Vec<Vec<usize>> = (g..=hi).map(|k| (0..n).map(|t| a.dim(v, t, (k - g) as usize)).collect()).collect();
    let exact = a.vanishes_from().is_some_and(|z| hi - g + 1 >= z as i64);
    let m = GradedModule::from_fn(field, n, shape.clone(), g, hi, true, exact, dims, |ai, k| {
        let arr = shape[ai];
        a.arrow_matrix(v, arr.src, (k - g) as usize, ai).expect("within depth")
    });
    if exact {
        m.trim()
    } else {
        m.close_if_vanishing(g)
    }
}

/// `L(v)<-g>`.
pub fn simple(a: &GradedAlgebra, v: usize, g: i64) -> GradedModule {
    let n = a.nverts();
    let mut dims = vec![0; n];
    dims[v] = 1;
    GradedModule::from_fn(a.field(), n, shapes_of(&a.presentation), g, g, true, true, vec![dims], |_, _| unreachable!("no arrow of degree 0"))
}

/// `I(v)`: the graded dual of the projective of the opposite algebra,
/// stored down to degree `lo`.
pub fn injective(op: &GradedAlgebra, v: usize, lo: i64) -> GradedModule {
    projective(op, v, 0, -lo).dual()
}

/// The canonical module of the given kind at vertex `v`. The window bound
/// is the top degree for projectives and the bottom degree for injectives.
pub fn canonical_module(a: &GradedAlgebra, op: &GradedAlgebra, kind: Canonical, v: usize, bound: i64) -> Result<GradedModule> {
    if v >= a.nverts() {
        return Err(Error::Usage(format!("unknown vertex index {v}")));
    }
    Ok(match kind {
        Canonical::Projective => projective(a, v, 0, bound),
        Canonical::Simple => simple(a, v, 0),
        Canonical::Injective => injective(op, v, bound),
    })
}

/// A list of generators `(v, g)`, standing for `⊕ P(v)<-g>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeModule {
    pub gens: Vec<(usize, i64)>,
}

impl FreeModule {
    pub fn new(gens: Vec<(usize, i64)>) -> FreeModule {
        FreeModule { gens }
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// The module `⊕ P(v)<-g>` stored up to degree `hi`.
    pub fn realize(&self, a: &GradedAlgebra, hi: i64) -> GradedModule {
        let parts: Vec<GradedModule> = self.gens.iter().map(|&(v, g)| projective(a, v, g, hi)).collect();
        match GradedModule::direct_sum(&parts) {
            Some(m) => m,
            None => GradedModule::zero(a.field(), a.nverts(), shapes_of(&a.presentation)).rewindow(hi + 1, hi, true, false),
        }
    }

    /// Offset of each generator's block inside the `(t, k)` component.
    pub fn offsets(&self, a: &GradedAlgebra, t: usize, k: i64) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.gens.len());
        let mut acc = 0;
        for &(v, g) in &self.gens {
            off.push(acc);
            if k >= g {
                acc += a.dim(v, t, (k - g) as usize);
            }
        }
        off
    }

    /// The coordinate vector of generator `i` inside its component.
    pub fn generator_vector(&self, a: &GradedAlgebra, i: usize) -> Vec<Scalar> {
        let (v, g) = self.gens[i];
        let total: usize = self.gens.iter().map(|&(w, h)| if g >= h { a.dim(w, v, (g - h) as usize) } else { 0 }).sum();
        let off = self.offsets(a, v, g)[i];
        let mut x = vec![a.field().zero(); total];
        // The identity path is the only basis element of degree 0.
        x[off] = a.field().one();
        x
    }
}

/// The map `⊕ P(v_i)<-g_i> -> M` sending generator `i` to `images[i] ∈
/// e_{v_i} M_{g_i}`, on degrees where `M` is known (up to `hi`).
pub fn free_map(a: &GradedAlgebra, f: &FreeModule, target: &GradedModule, images: &[Vec<Scalar>], hi: i64) -> ModuleMap {
    let field = a.field();
    let n = a.nverts();
    let lo = f.gens.iter().map(|g| g.1).min().unwrap_or(hi + 1);
    let mut top = hi;
    if !target.hi_exact() {
        top = min(top, target.hi());
    }
    let blocks = (lo..=top)
        .map(|k| {
            (0..n)
                .map(|t| {
                    let rows = target.dim_at(t, k);
                    let mut cols = Vec::new();
                    for (i, &(v, g)) in f.gens.iter().enumerate() {
                        if k < g {
                            continue;
                        }
                        let d = (k - g) as usize;
                        let blk = a.block(v, t, d).expect("within depth");
                        for b in 0..blk.dim() {
                            let p = blk.basis_path(b);
                            let y = target.apply_path(p, g, &images[i]).unwrap_or_else(|| vec![field.zero(); rows]);
                            cols.push(if y.len() == rows { y } else { vec![field.zero(); rows] });
                        }
                    }
                    Matrix::from_cols(field, rows, &cols)
                })
                .collect()
        })
        .collect();
    ModuleMap { lo, hi: top, blocks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra_to;
    use crate::algebra::tests::{arrow_loop, commuting_loops, kx, pres};
    use crate::module::hom_dim;

    #[test]
    fn one_dimensional_algebra() {
        let a = build_algebra_to(&pres(&["1"], vec![], vec![], 3), 3).unwrap();
        let op = build_algebra_to(&pres(&["1"], vec![], vec![], 3).opposite(), 3).unwrap();
        for kind in [Canonical::Projective, Canonical::Simple, Canonical::Injective] {
            let m = canonical_module(&a, &op, kind, 0, if kind == Canonical::Injective { -3 } else { 3 }).unwrap();
            assert_eq!(m.graded_dims(), vec![(0, vec![1])]);
            assert!(m.is_finite());
        }
        assert!(canonical_module(&a, &op, Canonical::Simple, 4, 0).is_err());
    }

    #[test]
    fn arrow_loop_projective_column() {
        let a = build_algebra_to(&arrow_loop(6), 6).unwrap();
        let p1 = projective(&a, 0, 0, 5);
        assert_eq!(p1.dim_at(0, 0), 1);
        for j in 1..=5 {
            assert_eq!((p1.dim_at(0, j), p1.dim_at(1, j)), (0, 1));
        }
        assert!(!p1.hi_exact());
    }

    #[test]
    fn commuting_loops_projective_and_dual() {
        let p = commuting_loops(6);
        let a = build_algebra_to(&p, 6).unwrap();
        let p1 = projective(&a, 0, 0, 6);
        assert_eq!(p1.total_dim(0), 1);
        assert!((1..=6).all(|j| p1.total_dim(j) == 2));
        assert!(p1.satisfies(&p));
        let d = p1.dual();
        assert_eq!(d.lo(), -6);
        assert_eq!(d.total_dim(0), 1);
        assert_eq!(d.total_dim(-1), 2);
        assert!(d.satisfies(&p.opposite()));
        assert_eq!(d.dual(), p1);
    }

    #[test]
    fn shift_moves_simple_top() {
        let a = build_algebra_to(&kx(4), 4).unwrap();
        let l = simple(&a, 0, 0);
        assert_eq!(l.shift(0), l);
        assert_eq!(l.shift(1).shift(-1), l);
        assert_eq!(l.shift(1).bottom(), Some(-1));
    }

    #[test]
    fn yoneda_dimensions() {
        let p = commuting_loops(6);
        let a = build_algebra_to(&p, 12).unwrap();
        let m = projective(&a, 0, 0, 6);
        for v in 0..2 {
            for j in 0..=3 {
                let pv = projective(&a, v, j, 6);
                assert_eq!(hom_dim(&pv, &m), m.dim_at(v, j), "v={v} j={j}");
            }
        }
        assert_eq!(hom_dim(&projective(&a, 1, 0, 6), &m), 0);
    }

    #[test]
    fn schur_for_simples() {
        let a = build_algebra_to(&commuting_loops(4), 4).unwrap();
        for v in 0..2 {
            for w in 0..2 {
                assert_eq!(hom_dim(&simple(&a, v, 0), &simple(&a, w, 0)), usize::from(v == w));
            }
        }
    }

    #[test]
    fn injective_socle() {
        let p = commuting_loops(5);
        let op = build_algebra_to(&p.opposite(), 5).unwrap();
        let i2 = injective(&op, 1, -5);
        let (soc, unknown) = i2.socle();
        assert!(unknown.is_empty());
        assert_eq!(soc.dim(), 1);
        assert_eq!(soc.dims()[(0 - i2.lo()) as usize], vec![0, 1]);
    }
}
