//! Truncated positively graded path algebras given by quiver and relations.
//!
//! Paths compose left to right: `p*q` traverses `p` first. The block
//! `(s, t, d)` holds the paths of degree `d` from `s` to `t` modulo the
//! relation ideal; in module terms it is `e_t A_d e_s`, the vertex-`t` part of
//! `P(s)` in degree `d`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::strat::StratOrder;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub dst: usize,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

/// A path as a sequence of arrow indices. The empty path is only meaningful
/// together with a vertex.
pub type Path = Vec<usize>;

/// A homogeneous linear combination of parallel paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(Scalar, Path)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
    pub field: Field,
    pub truncation: usize,
}

impl Quiver {
    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Source, target and degree of a nonempty path, if it is composable.
    pub fn path_shape(&self, p: &[usize]) -> Option<(usize, usize, usize)> {
        let first = self.arrows.get(*p.first()?)?;
        let mut end = first.dst;
        let mut deg = first.degree;
        for &a in &p[1..] {
            let arr = self.arrows.get(a)?;
            if arr.src != end {
                return None;
            }
            end = arr.dst;
            deg += arr.degree;
        }
        Some((first.src, end, deg))
    }

    pub fn path_name(&self, p: &[usize]) -> String {
        p.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
    }

    /// The quiver with every arrow reversed (same names and indices).
    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self.arrows.iter().map(|a| Arrow { name: a.name.clone(), src: a.dst, dst: a.src, degree: a.degree }).collect(),
        }
    }

    pub fn max_arrow_degree(&self) -> usize {
        self.arrows.iter().map(|a| a.degree).max().unwrap_or(1)
    }
}

impl Relation {
    /// Source, target and degree shared by all terms.
    pub fn shape(&self, q: &Quiver) -> Result<(usize, usize, usize)> {
        let mut shape = None;
        for (_, p) in &self.terms {
            let s = q.path_shape(p).ok_or_else(|| Error::Presentation(format!("relation term {} is not a path", q.path_name(p))))?;
            match shape {
                None => shape = Some(s),
                Some((s0, t0, d0)) => {
                    if (s0, t0) != (s.0, s.1) {
                        return Err(Error::Presentation(format!("relation mixes non-parallel paths ({})", q.path_name(p))));
                    }
                    if d0 != s.2 {
                        return Err(Error::Presentation(format!("relation is not homogeneous (degrees {} and {})", d0, s.2)));
                    }
                }
            }
        }
        shape.ok_or_else(|| Error::Presentation("empty relation".into()))
    }
}

impl Presentation {
    /// Checks the presentation invariants.
    pub fn validate(&self) -> Result<()> {
        let q = &self.quiver;
        if q.vertices.is_empty() {
            return Err(Error::Presentation("the vertex set is empty".into()));
        }
        for (i, v) in q.vertices.iter().enumerate() {
            if q.vertices[..i].contains(v) {
                return Err(Error::Presentation(format!("duplicate vertex {v}")));
            }
        }
        for (i, a) in q.arrows.iter().enumerate() {
            if q.arrows[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::Presentation(format!("duplicate arrow name {}", a.name)));
            }
            if a.degree == 0 {
                return Err(Error::Presentation(format!("arrow {} has degree 0", a.name)));
            }
            if a.src >= q.vertices.len() || a.dst >= q.vertices.len() {
                return Err(Error::Presentation(format!("arrow {} has an unknown endpoint", a.name)));
            }
        }
        if self.truncation == 0 {
            return Err(Error::Presentation("truncation must be at least 1".into()));
        }
        for r in &self.relations {
            let (_, _, d) = r.shape(q)?;
            if d < 2 {
                return Err(Error::Presentation("relations must have degree at least 2".into()));
            }
            if r.terms.iter().any(|(c, _)| c.field() != self.field) {
                return Err(Error::Presentation("relation coefficient outside the field".into()));
            }
        }
        Ok(())
    }

    /// The presentation of the opposite algebra.
    pub fn opposite(&self) -> Presentation {
        Presentation {
            quiver: self.quiver.opposite(),
            relations: self
                .relations
                .iter()
                .map(|r| Relation { terms: r.terms.iter().map(|(c, p)| (c.clone(), p.iter().rev().copied().collect())).collect() })
                .collect(),
            field: self.field,
            truncation: self.truncation,
        }
    }

    pub fn with_truncation(&self, n: usize) -> Presentation {
        Presentation { truncation: n, ..self.clone() }
    }
}

/// Paths of one degree between two vertices, modulo the ideal.
#[derive(Clone, Debug)]
pub struct Block {
    pub paths: Vec<Path>,
    index: HashMap<Path, usize>,
    /// Indices (into `paths`) of the normal-form basis.
    pub basis: Vec<usize>,
    /// Coordinates of every path in the basis: `basis.len() x paths.len()`.
    pub reduce: Matrix,
    /// Rows spanning the ideal in path coordinates (reduced echelon form).
    ideal: Matrix,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_path(&self, i: usize) -> &Path {
        &self.paths[self.basis[i]]
    }

    /// Normal-form coordinates of a path in this block.
    pub fn coords(&self, p: &[usize]) -> Vec<Scalar> {
        let c = self.index[p];
        self.reduce.col(c)
    }
}

/// A graded path algebra computed up to a fixed degree.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    pub presentation: Presentation,
    pub depth: usize,
    blocks: BTreeMap<(usize, usize, usize), Block>,
}

impl GradedAlgebra {
    pub fn quiver(&self) -> &Quiver {
        &self.presentation.quiver
    }

    pub fn field(&self) -> Field {
        self.presentation.field
    }

    pub fn nverts(&self) -> usize {
        self.presentation.quiver.vertices.len()
    }

    /// The block of paths from `s` to `t` in degree `d`, if `d <= depth`.
    pub fn block(&self, s: usize, t: usize, d: usize) -> Option<&Block> {
        self.blocks.get(&(s, t, d))
    }

    /// `dim e_t A_d e_s`; zero beyond the computed depth.
    pub fn dim(&self, s: usize, t: usize, d: usize) -> usize {
        self.block(s, t, d).map_or(0, Block::dim)
    }

    pub fn dim_total(&self, d: usize) -> usize {
        let n = self.nverts();
        (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).map(|(s, t)| self.dim(s, t, d)).sum()
    }

    /// Graded Cartan matrix `C_d[mu][lambda] = dim e_mu A_d e_lambda`.
    pub fn cartan(&self, d: usize) -> Vec<Vec<usize>> {
        let n = self.nverts();
        (0..n).map(|mu| (0..n).map(|la| self.dim(la, mu, d)).collect()).collect()
    }

    /// Right multiplication by an arrow on `e_t A_d e_s` as a matrix into
    /// `e_{t'} A_{d+k} e_s`. `None` beyond the computed depth.
    pub fn arrow_matrix(&self, s: usize, t: usize, d: usize, a: usize) -> Option<Matrix> {
        let arr = &self.quiver().arrows[a];
        assert_eq!(arr.src, t, "arrow does not start at the path end");
        let src = self.block(s, t, d)?;
        let dst = self.block(s, arr.dst, d + arr.degree)?;
        let cols: Vec<Vec<Scalar>> = (0..src.dim())
            .map(|i| {
                let mut p = src.basis_path(i).clone();
                p.push(a);
                dst.coords(&p)
            })
            .collect();
        Some(Matrix::from_cols(self.field(), dst.dim(), &cols))
    }

    /// Product of a basis element of block `(s,t,d)` with one of `(t,u,e)`.
    pub fn mul_basis(&self, s: usize, t: usize, d: usize, i: usize, u: usize, e: usize, j: usize) -> Option<Vec<Scalar>> {
        let x = self.block(s, t, d)?;
        let y = self.block(t, u, e)?;
        let z = self.block(s, u, d + e)?;
        let mut p = x.basis_path(i).clone();
        p.extend(y.basis_path(j));
        Some(z.coords(&p))
    }

    /// First degree from which the algebra provably vanishes, if within depth.
    pub fn vanishes_from(&self) -> Option<usize> {
        let k = self.presentation.quiver.max_arrow_degree();
        (1..=self.depth + 1).find(|&d| d + k <= self.depth + 1 && (d..d + k).all(|e| self.dim_total(e) == 0))
    }
}

/// Builds the path algebra modulo relations up to the presentation's
/// truncation degree.
pub fn build_algebra(p: &Presentation) -> Result<GradedAlgebra> {
    build_algebra_to(p, p.truncation)
}

/// Builds the path algebra up to an explicit degree.
pub fn build_algebra_to(p: &Presentation, depth: usize) -> Result<GradedAlgebra> {
    p.validate()?;
    let q = &p.quiver;
    let field = p.field;
    let n = q.vertices.len();
    let mut paths: BTreeMap<(usize, usize, usize), Vec<Path>> = BTreeMap::new();
    for v in 0..n {
        paths.insert((v, v, 0), vec![Vec::new()]);
    }
    for d in 1..=depth {
        for s in 0..n {
            for t in 0..n {
                let mut list = Vec::new();
                for (ai, a) in q.arrows.iter().enumerate() {
                    if a.dst != t || a.degree > d {
                        continue;
                    }
                    if let Some(prev) = paths.get(&(s, a.src, d - a.degree)) {
                        for pp in prev {
                            let mut np = pp.clone();
                            np.push(ai);
                            list.push(np);
                        }
                    }
                }
                if !list.is_empty() || s == t && d == 0 {
                    list.sort();
                    paths.insert((s, t, d), list);
                }
            }
        }
    }

    let mut rel_by_block: BTreeMap<(usize, usize, usize), Vec<&Relation>> = BTreeMap::new();
    for r in &p.relations {
        rel_by_block.entry(r.shape(q)?).or_default().push(r);
    }

    let mut blocks: BTreeMap<(usize, usize, usize), Block> = BTreeMap::new();
    for d in 0..=depth {
        for s in 0..n {
            for t in 0..n {
                let list = paths.get(&(s, t, d)).cloned().unwrap_or_default();
                let index: HashMap<Path, usize> = list.iter().cloned().enumerate().map(|(i, pp)| (pp, i)).collect();
                let m = list.len();
                let mut gens: Vec<Vec<Scalar>> = Vec::new();
                for r in rel_by_block.get(&(s, t, d)).into_iter().flatten() {
                    let mut v = vec![field.zero(); m];
                    for (c, pp) in &r.terms {
                        let i = index[pp];
                        v[i] = &v[i] + c;
                    }
                    gens.push(v);
                }
                for (ai, a) in q.arrows.iter().enumerate() {
                    if a.degree > d {
                        continue;
                    }
                    // I_{d-k} * a
                    if a.dst == t {
                        if let Some(b) = blocks.get(&(s, a.src, d - a.degree)) {
                            for row in 0..b.ideal.rows() {
                                let mut v = vec![field.zero(); m];
                                for (ci, pp) in b.paths.iter().enumerate() {
                                    let c = b.ideal.get(row, ci);
                                    if !c.is_zero() {
                                        let mut np = pp.clone();
                                        np.push(ai);
                                        v[index[&np]] = c.clone();
                                    }
                                }
                                gens.push(v);
                            }
                        }
                    }
                    // a * I_{d-k}
                    if a.src == s {
                        if let Some(b) = blocks.get(&(a.dst, t, d - a.degree)) {
                            for row in 0..b.ideal.rows() {
                                let mut v = vec![field.zero(); m];
                                for (ci, pp) in b.paths.iter().enumerate() {
                                    let c = b.ideal.get(row, ci);
                                    if !c.is_zero() {
                                        let mut np = vec![ai];
                                        np.extend(pp);
                                        v[index[&np]] = c.clone();
                                    }
                                }
                                gens.push(v);
                            }
                        }
                    }
                }
                let ideal_raw = Matrix::from_rows(field, gens.clone());
                let ideal_raw = if gens.is_empty() { Matrix::zeros(field, 0, m) } else { ideal_raw };
                let e = ideal_raw.echelon();
                let rank = e.pivots.len();
                let ideal = e.rref.block(0, rank, 0, m);
                let mut is_pivot = vec![false; m];
                for &c in &e.pivots {
                    is_pivot[c] = true;
                }
                let basis: Vec<usize> = (0..m).filter(|&c| !is_pivot[c]).collect();
                let mut bpos = vec![usize::MAX; m];
                for (i, &c) in basis.iter().enumerate() {
                    bpos[c] = i;
                }
                let mut reduce = Matrix::zeros(field, basis.len(), m);
                for c in 0..m {
                    if !is_pivot[c] {
                        reduce.set(bpos[c], c, field.one());
                    }
                }
                for (row, &pc) in e.pivots.iter().enumerate() {
                    for (i, &bc) in basis.iter().enumerate() {
                        reduce.set(i, pc, -ideal.get(row, bc));
                    }
                }
                if m > 0 || d == 0 {
                    blocks.insert((s, t, d), Block { paths: list, index, basis, reduce, ideal });
                }
            }
        }
    }
    // Blocks with no paths are kept implicit; make every (s,t,d) addressable.
    for d in 0..=depth {
        for s in 0..n {
            for t in 0..n {
                blocks.entry((s, t, d)).or_insert_with(|| Block {
                    paths: Vec::new(),
                    index: HashMap::new(),
                    basis: Vec::new(),
                    reduce: Matrix::zeros(field, 0, 0),
                    ideal: Matrix::zeros(field, 0, 0),
                });
            }
        }
    }
    Ok(GradedAlgebra { presentation: p.clone(), depth, blocks })
}

/// The presentation of `B = A / A e A` for the idempotent `e` of a class:
/// vertices of the class and every arrow touching them are removed, and
/// relations are projected by killing paths through the class.
pub fn quotient_presentation(p: &Presentation, class: &[usize]) -> (Presentation, Vec<usize>) {
    let q = &p.quiver;
    let keep: Vec<usize> = (0..q.vertices.len()).filter(|v| !class.contains(v)).collect();
    let vmap: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut amap = HashMap::new();
    let mut arrows = Vec::new();
    for (ai, a) in q.arrows.iter().enumerate() {
        if let (Some(&s), Some(&t)) = (vmap.get(&a.src), vmap.get(&a.dst)) {
            amap.insert(ai, arrows.len());
            arrows.push(Arrow { name: a.name.clone(), src: s, dst: t, degree: a.degree });
        }
    }
    let mut relations = Vec::new();
    for r in &p.relations {
        let terms: Vec<(Scalar, Path)> =
            r.terms.iter().filter(|(_, pp)| pp.iter().all(|a| amap.contains_key(a))).map(|(c, pp)| (c.clone(), pp.iter().map(|a| amap[a]).collect())).collect();
        if !terms.is_empty() && (q.path_shape(&r.terms[0].1).is_some_and(|(s, t, _)| vmap.contains_key(&s) && vmap.contains_key(&t))) {
            relations.push(Relation { terms });
        }
    }
    (
        Presentation {
            quiver: Quiver { vertices: keep.iter().map(|&v| q.vertices[v].clone()).collect(), arrows },
            relations,
            field: p.field,
            truncation: p.truncation,
        },
        keep,
    )
}

/// `B_c = A / A e_c A` for a maximal class `c` of the order.
///
/// Removing the only class yields the zero algebra, reported as `None`.
pub fn quotient_by_class(a: &GradedAlgebra, order: &StratOrder, class: usize) -> Result<Option<GradedAlgebra>> {
    if !order.is_maximal_class(class) {
        return Err(Error::Usage(format!("class {class} is not maximal")));
    }
    let members = order.class_members(class);
    if members.len() == a.nverts() {
        return Ok(None);
    }
    let (pres, _) = quotient_presentation(&a.presentation, members);
    build_algebra_to(&pres, a.depth).map(Some)
}

/// Outcome of the positivity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// Checks that `A_0` is spanned by orthogonal vertex idempotents and that
/// every generator lives in positive degree.
pub fn validate_positive(a: &GradedAlgebra) -> PositivityReport {
    let mut violations = Vec::new();
    for arr in &a.quiver().arrows {
        if arr.degree == 0 {
            violations.push(format!("arrow {} has degree 0", arr.name));
        }
    }
    let n = a.nverts();
    for s in 0..n {
        for t in 0..n {
            let want = usize::from(s == t);
            if a.dim(s, t, 0) != want {
                violations.push(format!("e_{} A_0 e_{} has dimension {} (expected {})", a.quiver().vertices[t], a.quiver().vertices[s], a.dim(s, t, 0), want));
            }
        }
    }
    PositivityReport { ok: violations.is_empty(), violations }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn arrow(name: &str, src: usize, dst: usize) -> Arrow {
        Arrow { name: name.into(), src, dst, degree: 1 }
    }

    pub fn pres(vertices: &[&str], arrows: Vec<Arrow>, rels: Vec<Vec<(i64, Vec<usize>)>>, n: usize) -> Presentation {
        let f = Field::Rational;
        Presentation {
            quiver: Quiver { vertices: vertices.iter().map(|s| s.to_string()).collect(), arrows },
            relations: rels.into_iter().map(|r| Relation { terms: r.into_iter().map(|(c, p)| (f.int(c), p)).collect() }).collect(),
            field: f,
            truncation: n,
        }
    }

    /// Loop alpha at 1, beta: 1 -> 2.
    pub fn loop_arrow(n: usize) -> Presentation {
        pres(&["1", "2"], vec![arrow("alpha", 0, 0), arrow("beta", 0, 1)], vec![], n)
    }

    /// alpha: 1 -> 2, loop beta at 2.
    pub fn arrow_loop(n: usize) -> Presentation {
        pres(&["1", "2"], vec![arrow("alpha", 0, 1), arrow("beta", 1, 1)], vec![], n)
    }

    /// Loops b1, b2, alpha: 1 -> 2 with alpha*b2 = b1*alpha.
    pub fn commuting_loops(n: usize) -> Presentation {
        pres(&["1", "2"], vec![arrow("b1", 0, 0), arrow("b2", 1, 1), arrow("alpha", 0, 1)], vec![vec![(1, vec![2, 1]), (-1, vec![0, 2])]], n)
    }

    pub fn kx(n: usize) -> Presentation {
        pres(&["1"], vec![arrow("x", 0, 0)], vec![], n)
    }

    /// Independent count: enumerate all paths and the relation consequences
    /// by brute force (all u*r*v), then take ranks.
    fn oracle_dim(p: &Presentation, s: usize, t: usize, d: usize) -> usize {
        let q = &p.quiver;
        let mut all: Vec<Path> = vec![vec![]];
        let mut frontier: Vec<Path> = vec![vec![]];
        for _ in 0..d {
            let mut next = Vec::new();
            for pp in &frontier {
                for ai in 0..q.arrows.len() {
                    let mut np = pp.clone();
                    np.push(ai);
                    if q.path_shape(&np).is_some() {
                        next.push(np);
                    }
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        let fits = |pp: &Path| -> bool {
            if pp.is_empty() {
                return s == t && d == 0;
            }
            q.path_shape(pp) == Some((s, t, d))
        };
        let target: Vec<&Path> = all.iter().filter(|pp| fits(pp)).collect();
        let f = p.field;
        let mut rows = Vec::new();
        for r in &p.relations {
            for u in &all {
                for v in &all {
                    let mut v_row = vec![f.zero(); target.len()];
                    let mut ok = false;
                    for (c, rp) in &r.terms {
                        let mut w = u.clone();
                        w.extend(rp);
                        w.extend(v);
                        if q.path_shape(&w).is_some() && fits(&w) {
                            let i = target.iter().position(|x| **x == w).unwrap();
                            v_row[i] = &v_row[i] + c;
                            ok = true;
                        }
                    }
                    if ok {
                        rows.push(v_row);
                    }
                }
            }
        }
        let rank = if rows.is_empty() { 0 } else { Matrix::from_rows(f, rows).rank() };
        target.len() - rank
    }

    #[test]
    fn trivial_algebra() {
        let a = build_algebra(&pres(&["1"], vec![], vec![], 4)).unwrap();
        assert_eq!(a.dim_total(0), 1);
        assert!((1..=4).all(|d| a.dim_total(d) == 0));
    }

    #[test]
    fn loop_arrow_dimensions() {
        let a = build_algebra(&loop_arrow(6)).unwrap();
        for d in 1..=6 {
            assert_eq!(a.dim_total(d), 2);
        }
        for d in 1..=4 {
            assert_eq!(a.dim_total(d), oracle_dim(&loop_arrow(6), 0, 0, d) + oracle_dim(&loop_arrow(6), 0, 1, d));
        }
    }

    #[test]
    fn commuting_loops_commuting_square() {
        let p = commuting_loops(6);
        let a = build_algebra(&p).unwrap();
        for d in 1..=6 {
            assert_eq!(a.dim(0, 1, d), 1);
            assert_eq!(a.dim(0, 0, d), 1);
            assert_eq!(a.dim(1, 1, d), 1);
            assert_eq!(a.dim(1, 0, d), 0);
        }
        for d in 0..=4 {
            for s in 0..2 {
                for t in 0..2 {
                    assert_eq!(a.dim(s, t, d), oracle_dim(&p, s, t, d), "block {s} {t} {d}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_relations() {
        let bad = pres(&["1", "2"], vec![arrow("a", 0, 1), arrow("b", 1, 1)], vec![vec![(1, vec![0]), (1, vec![0, 1])]], 3);
        assert!(matches!(build_algebra(&bad), Err(Error::Presentation(_))));
        let nonpar = pres(&["1", "2"], vec![arrow("a", 0, 1), arrow("b", 0, 0), arrow("c", 1, 1)], vec![vec![(1, vec![1, 1]), (1, vec![0, 2])]], 3);
        assert!(matches!(build_algebra(&nonpar), Err(Error::Presentation(_))));
    }

    #[test]
    fn truncation_is_stable() {
        let p = commuting_loops(5);
        let a5 = build_algebra(&p).unwrap();
        let a6 = build_algebra(&p.with_truncation(6)).unwrap();
        for d in 0..=5 {
            for s in 0..2 {
                for t in 0..2 {
                    let (b5, b6) = (a5.block(s, t, d).unwrap(), a6.block(s, t, d).unwrap());
                    assert_eq!(b5.basis, b6.basis);
                    assert_eq!(b5.reduce, b6.reduce);
                }
            }
        }
    }

    #[test]
    fn associativity_and_idempotents() {
        let a = build_algebra(&commuting_loops(5)).unwrap();
        let n = 2;
        for d in 0..=5 {
            let total: usize = (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).map(|(s, t)| a.dim(s, t, d)).sum();
            assert_eq!(total, a.dim_total(d));
        }
        for (s, t, u, w) in [(0, 0, 1, 1), (0, 1, 1, 1), (0, 0, 0, 1)] {
            for d in 0..=2 {
                for e in 0..=1 {
                    for g in 0..=2 {
                        for i in 0..a.dim(s, t, d) {
                            for j in 0..a.dim(t, u, e) {
                                for k in 0..a.dim(u, w, g) {
                                    let xy = a.mul_basis(s, t, d, i, u, e, j).unwrap();
                                    let left: Vec<Scalar> = (0..a.dim(s, w, d + e + g))
                                        .map(|o| {
                                            let mut acc = a.field().zero();
                                            for (l, c) in xy.iter().enumerate() {
                                                let z = a.mul_basis(s, u, d + e, l, w, g, k).unwrap();
                                                acc = &acc + &(c * &z[o]);
                                            }
                                            acc
                                        })
                                        .collect();
                                    let yz = a.mul_basis(t, u, e, j, w, g, k).unwrap();
                                    let right: Vec<Scalar> = (0..a.dim(s, w, d + e + g))
                                        .map(|o| {
                                            let mut acc = a.field().zero();
                                            for (l, c) in yz.iter().enumerate() {
                                                let z = a.mul_basis(s, t, d, i, w, e + g, l).unwrap();
                                                acc = &acc + &(c * &z[o]);
                                            }
                                            acc
                                        })
                                        .collect();
                                    assert_eq!(left, right);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn quotients_by_maximal_class() {
        let order = StratOrder::chain(2);
        let c = build_algebra(&commuting_loops(6)).unwrap();
        let b = quotient_by_class(&c, &order, 1).unwrap().unwrap();
        assert_eq!(b.nverts(), 1);
        assert!((0..=6).all(|d| b.dim_total(d) == 1));
        let b2 = quotient_by_class(&build_algebra(&arrow_loop(6)).unwrap(), &order, 1).unwrap().unwrap();
        assert_eq!(b2.dim_total(0), 1);
        assert!((1..=6).all(|d| b2.dim_total(d) == 0));
        assert!(quotient_by_class(&c, &order, 0).is_err());
        let full = StratOrder::new(vec![vec![0, 1]], 2).unwrap();
        assert!(quotient_by_class(&c, &full, 0).unwrap().is_none());
    }

    #[test]
    fn positivity() {
        let mut c = build_algebra(&commuting_loops(4)).unwrap();
        assert!(validate_positive(&c).ok);
        c.presentation.quiver.arrows[2].degree = 0;
        let r = validate_positive(&c);
        assert!(!r.ok);
        assert!(r.violations[0].contains("alpha"));
    }

    #[test]
    fn finite_algebras_vanish() {
        let dual_numbers = pres(&["1"], vec![arrow("x", 0, 0)], vec![vec![(1, vec![0, 0])]], 5);
        assert_eq!(build_algebra(&dual_numbers).unwrap().vanishes_from(), Some(2));
        assert_eq!(build_algebra(&kx(5)).unwrap().vanishes_from(), None);
    }
}
