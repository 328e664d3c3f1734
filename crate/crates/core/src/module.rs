//! Graded modules as quiver representations on a finite window of degrees.
//!
//! A module stores `M_{v,j}` for degrees `lo <= j <= hi` and, for each arrow
//! `a: s -> t` of degree `k`, the action `M_{s,j} -> M_{t,j+k}`. Each window
//! end is either exact (the module vanishes beyond it) or cut (the module
//! may continue but is not stored).

use std::cmp::{max, min};

use crate::algebra::{Arrow, Presentation};
use crate::linalg::{quotient_basis, Field, Matrix, Scalar};

/// Source, target and degree of an arrow, as seen by a module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ArrowShape {
    pub src: usize,
    pub dst: usize,
    pub degree: usize,
}

impl From<&Arrow> for ArrowShape {
    fn from(a: &Arrow) -> Self {
        ArrowShape { src: a.src, dst: a.dst, degree: a.degree }
    }
}

pub fn shapes_of(p: &Presentation) -> Vec<ArrowShape> {
    p.quiver.arrows.iter().map(ArrowShape::from).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    field: Field,
    nverts: usize,
    shape: Vec<ArrowShape>,
    lo: i64,
    hi: i64,
    lo_exact: bool,
    hi_exact: bool,
    dims: Vec<Vec<usize>>,
    acts: Vec<Vec<Option<Matrix>>>,
}

/// A degree-zero homogeneous map, stored blockwise on a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub lo: i64,
    pub hi: i64,
    /// `blocks[j - lo][v]` maps the source component at `(v, j)` to the
    /// target component at `(v, j)`.
    pub blocks: Vec<Vec<Matrix>>,
}

/// A submodule given by a spanning basis in every component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submodule {
    /// `basis[j - lo][v]` has the basis vectors as columns.
    pub basis: Vec<Vec<Matrix>>,
}

impl GradedModule {
    /// The zero module.
    pub fn zero(field: Field, nverts: usize, shape: Vec<ArrowShape>) -> GradedModule {
        GradedModule { field, nverts, shape, lo: 0, hi: -1, lo_exact: true, hi_exact: true, dims: Vec::new(), acts: Vec::new() }
    }

    /// Builds a module from its components. `act(a, j)` must return the
    /// action of arrow `a` on degree `j` whenever `j + deg(a) <= hi`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_fn(
        field: Field,
        nverts: usize,
        shape: Vec<ArrowShape>,
        lo: i64,
        hi: i64,
        lo_exact: bool,
        hi_exact: bool,
        dims: Vec<Vec<usize>>,
        mut act: impl FnMut(usize, i64) -> Matrix,
    ) -> GradedModule {
        assert_eq!(dims.len() as i64, max(hi - lo + 1, 0), "dims must cover the window");
        let mut acts = Vec::with_capacity(shape.len());
        for (ai, a) in shape.iter().enumerate() {
            let mut row = Vec::with_capacity(dims.len());
            for j in lo..=hi {
                if j + a.degree as i64 <= hi {
                    let m = act(ai, j);
                    let want = (dims[(j + a.degree as i64 - lo) as usize][a.dst], dims[(j - lo) as usize][a.src]);
                    assert_eq!((m.rows(), m.cols()), want, "action of arrow {ai} in degree {j} has the wrong size");
                    row.push(Some(m));
                } else {
                    row.push(None);
                }
            }
            acts.push(row);
        }
        GradedModule { field, nverts, shape, lo, hi, lo_exact, hi_exact, dims, acts }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nverts(&self) -> usize {
        self.nverts
    }

    pub fn shape(&self) -> &[ArrowShape] {
        &self.shape
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn lo_exact(&self) -> bool {
        self.lo_exact
    }

    pub fn hi_exact(&self) -> bool {
        self.hi_exact
    }

    pub fn is_finite(&self) -> bool {
        self.lo_exact && self.hi_exact
    }

    /// Whether degree `j` is known (inside the window or beyond an exact end).
    pub fn known(&self, j: i64) -> bool {
        (j >= self.lo || self.lo_exact) && (j <= self.hi || self.hi_exact)
    }

    fn inside(&self, j: i64) -> bool {
        j >= self.lo && j <= self.hi
    }

    /// `dim e_v M_j`, or `None` beyond a cut end.
    pub fn dim(&self, v: usize, j: i64) -> Option<usize> {
        if self.inside(j) {
            Some(self.dims[(j - self.lo) as usize][v])
        } else if self.known(j) {
            Some(0)
        } else {
            None
        }
    }

    /// `dim e_v M_j`, treating unknown degrees as zero.
    pub fn dim_at(&self, v: usize, j: i64) -> usize {
        self.dim(v, j).unwrap_or(0)
    }

    pub fn total_dim(&self, j: i64) -> usize {
        (0..self.nverts).map(|v| self.dim_at(v, j)).sum()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().flatten().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total() == 0
    }

    /// Per-degree vertex dimensions over the window.
    pub fn graded_dims(&self) -> Vec<(i64, Vec<usize>)> {
        (self.lo..=self.hi).map(|j| (j, self.dims[(j - self.lo) as usize].clone())).collect()
    }

    /// Lowest degree with a nonzero component.
    pub fn bottom(&self) -> Option<i64> {
        (self.lo..=self.hi).find(|&j| self.total_dim(j) > 0)
    }

    /// Highest degree with a nonzero component.
    pub fn top_degree(&self) -> Option<i64> {
        (self.lo..=self.hi).rev().find(|&j| self.total_dim(j) > 0)
    }

    /// The action of arrow `a` on degree `j`, or `None` if unknown.
    pub fn act(&self, a: usize, j: i64) -> Option<Matrix> {
        let s = self.shape[a];
        let k = s.degree as i64;
        let (src, dst) = (self.dim(s.src, j)?, self.dim(s.dst, j + k)?);
        if self.inside(j) && self.inside(j + k) {
            Some(self.acts[a][(j - self.lo) as usize].clone().expect("stored action"))
        } else {
            Some(Matrix::zeros(self.field, dst, src))
        }
    }

    fn act_ref(&self, a: usize, j: i64) -> Option<&Matrix> {
        let k = self.shape[a].degree as i64;
        if self.inside(j) && self.inside(j + k) {
            self.acts[a][(j - self.lo) as usize].as_ref()
        } else {
            None
        }
    }

    /// Applies a path (arrow sequence, left to right) to `x ∈ e_v M_j`.
    /// Returns `None` if the result leaves the known window.
    pub fn apply_path(&self, path: &[usize], j: i64, x: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut cur = x.to_vec();
        let mut deg = j;
        for &a in path {
            let k = self.shape[a].degree as i64;
            if let Some(m) = self.act_ref(a, deg) {
                cur = m.mul_vec(&cur);
            } else {
                let m = self.act(a, deg)?;
                cur = m.mul_vec(&cur);
            }
            deg += k;
        }
        Some(cur)
    }

    /// Checks that every relation acts as zero wherever it is defined.
    pub fn satisfies(&self, p: &Presentation) -> bool {
        for r in &p.relations {
            let Ok((s, t, _)) = r.shape(&p.quiver) else { return false };
            for j in self.lo..=self.hi {
                let n = self.dim_at(s, j);
                if n == 0 {
                    continue;
                }
                let mut acc: Option<Vec<Vec<Scalar>>> = None;
                let mut defined = true;
                for (c, path) in &r.terms {
                    let cols: Option<Vec<Vec<Scalar>>> = (0..n)
                        .map(|i| {
                            let mut e = vec![self.field.zero(); n];
                            e[i] = self.field.one();
                            self.apply_path(path, j, &e)
                        })
                        .collect();
                    let Some(cols) = cols else {
                        defined = false;
                        break;
                    };
                    let cols: Vec<Vec<Scalar>> = cols.iter().map(|v| v.iter().map(|x| x * c).collect()).collect();
                    acc = Some(match acc {
                        None => cols,
                        Some(prev) => prev.iter().zip(&cols).map(|(u, w)| u.iter().zip(w).map(|(x, y)| x + y).collect()).collect(),
                    });
                }
                let _ = t;
                if defined {
                    if let Some(acc) = acc {
                        if acc.iter().flatten().any(|x| !x.is_zero()) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `M<i>`: the component in degree `j` is `M_{i+j}`.
    pub fn shift(&self, i: i64) -> GradedModule {
        GradedModule { lo: self.lo - i, hi: self.hi - i, ..self.clone() }
    }

    /// The graded dual, a module over the opposite quiver.
    pub fn dual(&self) -> GradedModule {
        let shape: Vec<ArrowShape> = self.shape.iter().map(|a| ArrowShape { src: a.dst, dst: a.src, degree: a.degree }).collect();
        let dims: Vec<Vec<usize>> = self.dims.iter().rev().cloned().collect();
        let me = self.clone();
        GradedModule::from_fn(self.field, self.nverts, shape.clone(), -self.hi, -self.lo, self.hi_exact, self.lo_exact, dims, move |a, j| {
            let k = shape[a].degree as i64;
            me.act(a, -j - k).expect("inside the window").transpose()
        })
    }

    /// Restricts to degrees `<= h`, marking the top end cut if anything
    /// nonzero was dropped.
    pub fn truncate_above(&self, h: i64) -> GradedModule {
        if h >= self.hi {
            return self.clone();
        }
        let new_hi = max(h, self.lo - 1);
        let dropped_zero = (new_hi + 1..=self.hi).all(|j| self.total_dim(j) == 0);
        let hi_exact = self.hi_exact && dropped_zero;
        self.rewindow(self.lo, new_hi, self.lo_exact, hi_exact)
    }

    /// Restricts to degrees `>= l`.
    pub fn truncate_below(&self, l: i64) -> GradedModule {
        if l <= self.lo {
            return self.clone();
        }
        let new_lo = min(l, self.hi + 1);
        let dropped_zero = (self.lo..new_lo).all(|j| self.total_dim(j) == 0);
        let lo_exact = self.lo_exact && dropped_zero;
        self.rewindow(new_lo, self.hi, lo_exact, self.hi_exact)
    }

    /// Removes zero degrees next to exact ends.
    pub fn trim(&self) -> GradedModule {
        let mut lo = self.lo;
        let mut hi = self.hi;
        if self.lo_exact {
            while lo <= hi && self.total_dim(lo) == 0 {
                lo += 1;
            }
        }
        if self.hi_exact {
            while hi >= lo && self.total_dim(hi) == 0 {
                hi -= 1;
            }
        }
        if lo > hi && self.lo_exact && self.hi_exact {
            return GradedModule::zero(self.field, self.nverts, self.shape.clone());
        }
        self.rewindow(lo, hi, self.lo_exact, self.hi_exact)
    }

    /// Pads with zero components up to the given window (only across exact
    /// ends) or shrinks to it.
    pub fn rewindow(&self, lo: i64, hi: i64, lo_exact: bool, hi_exact: bool) -> GradedModule {
        let dims: Vec<Vec<usize>> = (lo..=hi).map(|j| (0..self.nverts).map(|v| self.dim_at(v, j)).collect()).collect();
        let me = self;
        GradedModule::from_fn(self.field, self.nverts, self.shape.clone(), lo, hi, lo_exact, hi_exact, dims, |a, j| {
            me.act(a, j).expect("rewindow within known degrees")
        })
    }

    /// Widens the window to `[lo, hi]` where the module is known to vanish.
    pub fn pad(&self, lo: i64, hi: i64) -> GradedModule {
        let new_lo = if self.lo_exact { min(lo, self.lo) } else { self.lo };
        let new_hi = if self.hi_exact { max(hi, self.hi) } else { self.hi };
        self.rewindow(new_lo, new_hi, self.lo_exact, self.hi_exact)
    }

    /// Marks the top end exact once the module provably stops: it is
    /// generated in degrees `<= gen_bound` and vanishes on a band of width
    /// the maximal arrow degree above that.
    pub fn close_if_vanishing(&self, gen_bound: i64) -> GradedModule {
        if self.hi_exact {
            return self.trim();
        }
        let k = self.shape.iter().map(|a| a.degree as i64).max().unwrap_or(1);
        let start = max(gen_bound + 1, self.lo);
        let mut j = start;
        while j + k - 1 <= self.hi {
            if (j..j + k).all(|d| self.total_dim(d) == 0) {
                return self.rewindow(self.lo, j - 1, self.lo_exact, true).trim();
            }
            j += 1;
        }
        self.clone()
    }

    /// Direct sum; the window is the union, cut at the lowest cut end.
    pub fn direct_sum(parts: &[GradedModule]) -> Option<GradedModule> {
        let first = parts.first()?;
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for p in parts {
            if p.lo <= p.hi || !p.is_finite() {
                lo = min(lo, p.lo);
                hi = max(hi, p.hi);
            }
        }
        if lo > hi {
            return Some(GradedModule::zero(first.field, first.nverts, first.shape.clone()));
        }
        let mut lo_exact = true;
        let mut hi_exact = true;
        for p in parts {
            if !p.hi_exact && p.hi < hi {
                hi = p.hi;
            }
            if !p.lo_exact && p.lo > lo {
                lo = p.lo;
            }
        }
        for p in parts {
            if !p.hi_exact && p.hi == hi {
                hi_exact = false;
            }
            if !p.lo_exact && p.lo == lo {
                lo_exact = false;
            }
        }
        let n = first.nverts;
        let dims: Vec<Vec<usize>> = (lo..=hi).map(|j| (0..n).map(|v| parts.iter().map(|p| p.dim_at(v, j)).sum()).collect()).collect();
        let shape = first.shape.clone();
        Some(GradedModule::from_fn(first.field, n, shape.clone(), lo, hi, lo_exact, hi_exact, dims, |a, j| {
            let s = shape[a];
            let k = s.degree as i64;
            let rows: usize = parts.iter().map(|p| p.dim_at(s.dst, j + k)).sum();
            let cols: usize = parts.iter().map(|p| p.dim_at(s.src, j)).sum();
            let mut m = Matrix::zeros(first.field, rows, cols);
            let (mut r, mut c) = (0, 0);
            for p in parts {
                let blk = p.act(a, j).expect("known inside the common window");
                m.paste(r, c, &blk);
                r += blk.rows();
                c += blk.cols();
            }
            m
        }))
    }

    /// The whole module as a submodule of itself.
    pub fn full_submodule(&self) -> Submodule {
        Submodule { basis: (self.lo..=self.hi).map(|j| (0..self.nverts).map(|v| Matrix::identity(self.field, self.dim_at(v, j))).collect()).collect() }
    }

    pub fn zero_submodule(&self) -> Submodule {
        Submodule { basis: (self.lo..=self.hi).map(|j| (0..self.nverts).map(|v| Matrix::zeros(self.field, self.dim_at(v, j), 0)).collect()).collect() }
    }

    /// The submodule generated by the given seed vectors (`seeds[j-lo][v]`,
    /// columns in `M_{v,j}`).
    pub fn generate(&self, seeds: &[Vec<Matrix>]) -> Submodule {
        let mut basis: Vec<Vec<Matrix>> = Vec::with_capacity(self.dims.len());
        for j in self.lo..=self.hi {
            let mut row = Vec::with_capacity(self.nverts);
            for v in 0..self.nverts {
                let mut span = seeds[(j - self.lo) as usize][v].clone();
                for (ai, a) in self.shape.iter().enumerate() {
                    let k = a.degree as i64;
                    if a.dst != v || j - k < self.lo {
                        continue;
                    }
                    let prev: &Matrix = &basis[(j - k - self.lo) as usize][a.src];
                    if prev.cols() == 0 {
                        continue;
                    }
                    let img = self.act_ref(ai, j - k).expect("inside window").mul(prev);
                    span = span.hstack(&img);
                }
                row.push(span.column_basis());
            }
            basis.push(row);
        }
        Submodule { basis }
    }

    /// Seeds with every vector at the selected `(v, j)` components.
    pub fn seeds_where(&self, pick: impl Fn(usize, i64) -> bool) -> Vec<Vec<Matrix>> {
        (self.lo..=self.hi)
            .map(|j| {
                (0..self.nverts)
                    .map(|v| {
                        let d = self.dim_at(v, j);
                        if pick(v, j) {
                            Matrix::identity(self.field, d)
                        } else {
                            Matrix::zeros(self.field, d, 0)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// The trace of `{P(mu)<-g>}` over the selected `(mu, g)`: the
    /// submodule generated by all of `e_mu M_g` for those pairs.
    pub fn trace(&self, pick: impl Fn(usize, i64) -> bool) -> Submodule {
        self.generate(&self.seeds_where(pick))
    }

    /// The radical `r(A) M`.
    pub fn radical(&self) -> Submodule {
        let seeds = self.seeds_where(|_, _| false);
        let mut basis = Vec::new();
        for j in self.lo..=self.hi {
            let mut row = Vec::new();
            for v in 0..self.nverts {
                let mut span = Matrix::zeros(self.field, self.dim_at(v, j), 0);
                for (ai, a) in self.shape.iter().enumerate() {
                    let k = a.degree as i64;
                    if a.dst != v || j - k < self.lo {
                        continue;
                    }
                    span = span.hstack(self.act_ref(ai, j - k).expect("inside window"));
                }
                row.push(span.column_basis());
            }
            basis.push(row);
        }
        let _ = seeds;
        Submodule { basis }
    }

    /// The socle: vectors killed by every arrow. Degrees whose outgoing
    /// actions are unknown are left out and reported.
    pub fn socle(&self) -> (Submodule, Vec<i64>) {
        let mut basis = Vec::new();
        let mut unknown = Vec::new();
        for j in self.lo..=self.hi {
            let mut row = Vec::new();
            for v in 0..self.nverts {
                let d = self.dim_at(v, j);
                let mut stack = Matrix::zeros(self.field, 0, d);
                let mut known = true;
                for (ai, a) in self.shape.iter().enumerate() {
                    if a.src != v {
                        continue;
                    }
                    match self.act(ai, j) {
                        Some(m) => stack = stack.vstack(&m),
                        None => known = false,
                    }
                }
                if !known && d > 0 {
                    if !unknown.contains(&j) {
                        unknown.push(j);
                    }
                    row.push(Matrix::zeros(self.field, d, 0));
                } else {
                    row.push(stack.kernel_matrix());
                }
            }
            basis.push(row);
        }
        (Submodule { basis }, unknown)
    }

    /// Degrees `j` and vertices `v` where the top `M / rad M` is nonzero,
    /// with its dimension.
    pub fn top_dims(&self) -> Vec<(usize, i64, usize)> {
        let rad = self.radical();
        let mut out = Vec::new();
        for j in self.lo..=self.hi {
            for v in 0..self.nverts {
                let d = self.dim_at(v, j) - rad.basis[(j - self.lo) as usize][v].cols();
                if d > 0 {
                    out.push((v, j, d));
                }
            }
        }
        out
    }

    /// The module structure on a submodule.
    pub fn submodule(&self, s: &Submodule) -> (GradedModule, ModuleMap) {
        let dims: Vec<Vec<usize>> = s.basis.iter().map(|row| row.iter().map(Matrix::cols).collect()).collect();
        let sub = GradedModule::from_fn(self.field, self.nverts, self.shape.clone(), self.lo, self.hi, self.lo_exact, self.hi_exact, dims, |a, j| {
            let sh = self.shape[a];
            let k = sh.degree as i64;
            let src = &s.basis[(j - self.lo) as usize][sh.src];
            let dst = &s.basis[(j + k - self.lo) as usize][sh.dst];
            let img = self.act_ref(a, j).expect("inside window").mul(src);
            dst.solve_matrix(&img).expect("submodule is closed under the action")
        });
        let inc = ModuleMap { lo: self.lo, hi: self.hi, blocks: s.basis.clone() };
        (sub, inc)
    }

    /// The quotient by a submodule, with the projection.
    pub fn quotient(&self, s: &Submodule) -> (GradedModule, ModuleMap) {
        let mut proj = Vec::new();
        let mut sect = Vec::new();
        for (jj, row) in s.basis.iter().enumerate() {
            let mut pr = Vec::new();
            let mut se = Vec::new();
            for (v, b) in row.iter().enumerate() {
                let (p, q) = quotient_basis(b, self.dims[jj][v]);
                pr.push(p);
                se.push(q);
            }
            proj.push(pr);
            sect.push(se);
        }
        let dims: Vec<Vec<usize>> = proj.iter().map(|row| row.iter().map(Matrix::rows).collect()).collect();
        let q = GradedModule::from_fn(self.field, self.nverts, self.shape.clone(), self.lo, self.hi, self.lo_exact, self.hi_exact, dims, |a, j| {
            let sh = self.shape[a];
            let k = sh.degree as i64;
            let act = self.act_ref(a, j).expect("inside window");
            proj[(j + k - self.lo) as usize][sh.dst].mul(act).mul(&sect[(j - self.lo) as usize][sh.src])
        });
        (q, ModuleMap { lo: self.lo, hi: self.hi, blocks: proj })
    }

    /// Sum of two submodules.
    pub fn sub_sum(&self, a: &Submodule, b: &Submodule) -> Submodule {
        Submodule { basis: a.basis.iter().zip(&b.basis).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.hstack(y).column_basis()).collect()).collect() }
    }
}

impl Submodule {
    pub fn dim(&self) -> usize {
        self.basis.iter().flatten().map(Matrix::cols).sum()
    }

    pub fn dims(&self) -> Vec<Vec<usize>> {
        self.basis.iter().map(|r| r.iter().map(Matrix::cols).collect()).collect()
    }
}

impl ModuleMap {
    pub fn block(&self, j: i64, v: usize) -> Option<&Matrix> {
        if j < self.lo || j > self.hi {
            return None;
        }
        self.blocks.get((j - self.lo) as usize)?.get(v)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().all(Matrix::is_zero)
    }

    /// `g ∘ f` on the common window.
    pub fn compose(g: &ModuleMap, f: &ModuleMap) -> ModuleMap {
        let lo = max(f.lo, g.lo);
        let hi = min(f.hi, g.hi);
        let blocks = (lo..=hi)
            .map(|j| {
                let fr = &f.blocks[(j - f.lo) as usize];
                let gr = &g.blocks[(j - g.lo) as usize];
                fr.iter().zip(gr).map(|(a, b)| b.mul(a)).collect()
            })
            .collect();
        ModuleMap { lo, hi, blocks }
    }

    pub fn add(&self, o: &ModuleMap) -> ModuleMap {
        assert_eq!((self.lo, self.hi), (o.lo, o.hi), "maps on different windows");
        ModuleMap {
            lo: self.lo,
            hi: self.hi,
            blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect()).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> ModuleMap {
        ModuleMap { lo: self.lo, hi: self.hi, blocks: self.blocks.iter().map(|r| r.iter().map(|x| x.scale(c)).collect()).collect() }
    }

    /// Checks that the map commutes with every known arrow action.
    pub fn is_homogeneous(&self, src: &GradedModule, dst: &GradedModule) -> bool {
        for (ai, a) in src.shape.iter().enumerate() {
            let k = a.degree as i64;
            for j in self.lo..=self.hi - k {
                let (Some(ms), Some(md)) = (src.act(ai, j), dst.act(ai, j)) else { continue };
                let (Some(f0), Some(f1)) = (self.block(j, a.src), self.block(j + k, a.dst)) else { continue };
                if f1.mul(&ms) != md.mul(f0) {
                    return false;
                }
            }
        }
        true
    }

    /// Kernel of the map as a submodule of the source (on the map's window).
    pub fn kernel(&self, src: &GradedModule) -> Submodule {
        Submodule {
            basis: (src.lo..=src.hi)
                .map(|j| {
                    (0..src.nverts)
                        .map(|v| match self.block(j, v) {
                            Some(m) => m.kernel_matrix(),
                            None => Matrix::identity(src.field, src.dim_at(v, j)),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// Basis of the degree-zero homogeneous maps `M -> N`.
///
/// Maps are determined on the common window; arrows whose action is unknown
/// on either side impose no condition.
pub fn hom_space(m: &GradedModule, n: &GradedModule) -> Vec<ModuleMap> {
    let field = m.field;
    let lo = max(m.lo, n.lo);
    let hi = min(m.hi, n.hi);
    if lo > hi {
        return Vec::new();
    }
    let nv = m.nverts;
    // Variable offsets for f_{v,j}: dim N_{v,j} x dim M_{v,j}, row-major.
    let mut offset = vec![vec![0usize; nv]; (hi - lo + 1) as usize];
    let mut nvars = 0;
    for j in lo..=hi {
        for v in 0..nv {
            offset[(j - lo) as usize][v] = nvars;
            nvars += n.dim_at(v, j) * m.dim_at(v, j);
        }
    }
    if nvars == 0 {
        return Vec::new();
    }
    let var = |v: usize, j: i64, r: usize, c: usize| -> Option<usize> {
        if j < lo || j > hi {
            return None;
        }
        Some(offset[(j - lo) as usize][v] + r * m.dim_at(v, j) + c)
    };
    let mut eqs: Vec<Vec<Scalar>> = Vec::new();
    for (ai, a) in m.shape.iter().enumerate() {
        let k = a.degree as i64;
        for j in (lo - k)..=hi {
            let in_j = j >= lo && j <= hi;
            let in_jk = j + k >= lo && j + k <= hi;
            if !in_j && !in_jk {
                continue;
            }
            let (Some(ma), Some(na)) = (m.act(ai, j), n.act(ai, j)) else { continue };
            // f_{t,j+k} * ma - na * f_{s,j} = 0
            let rows_n = na.rows();
            let cols_m = ma.cols();
            for r in 0..rows_n {
                for c in 0..cols_m {
                    let mut eq = vec![field.zero(); nvars];
                    let mut nonzero = false;
                    if in_jk {
                        for l in 0..ma.rows() {
                            let x = ma.get(l, c);
                            if !x.is_zero() {
                                let idx = var(a.dst, j + k, r, l).expect("variable");
                                eq[idx] = &eq[idx] + x;
                                nonzero = true;
                            }
                        }
                    }
                    if in_j {
                        for l in 0..na.cols() {
                            let x = na.get(r, l);
                            if !x.is_zero() {
                                let idx = var(a.src, j, l, c).expect("variable");
                                eq[idx] = &eq[idx] - x;
                                nonzero = true;
                            }
                        }
                    }
                    if nonzero {
                        eqs.push(eq);
                    }
                }
            }
        }
    }
    let kernel = if eqs.is_empty() { Matrix::identity(field, nvars).columns() } else { Matrix::from_rows(field, eqs).kernel() };
    kernel
        .into_iter()
        .map(|sol| ModuleMap {
            lo,
            hi,
            blocks: (lo..=hi)
                .map(|j| {
                    (0..nv)
                        .map(|v| {
                            let (r, c) = (n.dim_at(v, j), m.dim_at(v, j));
                            let mut b = Matrix::zeros(field, r, c);
                            let off = offset[(j - lo) as usize][v];
                            for i in 0..r {
                                for l in 0..c {
                                    b.set(i, l, sol[off + i * c + l].clone());
                                }
                            }
                            b
                        })
                        .collect()
                })
                .collect(),
        })
        .collect()
}

/// `dim hom(M, N)` for degree-zero maps.
pub fn hom_dim(m: &GradedModule, n: &GradedModule) -> usize {
    hom_space(m, n).len()
}
