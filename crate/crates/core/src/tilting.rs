//! Tilting modules by iterated universal extensions, tilting
//! (co)resolutions, and the weakly adapted / adapted / balanced tests.

use std::collections::BTreeMap;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::homology::{Complex, Kind};
use crate::linalg::{Matrix, Scalar};
use crate::module::{hom_space, GradedModule, ModuleMap, Submodule};
use crate::projective::{free_map, projective, FreeModule};
use crate::strat::{delta_filtration, is_standardly_stratified, standard_to, strat_module, FiltrationReport, Layer, StratKind, Verdict};
use crate::tcomplex::TiltingSet;

/// Projective presentation data of `Δ(ν)<-g>`: `Ω ↪ P(ν)<-g> ↠ Δ(ν)<-g>`.
#[derive(Clone, Debug)]
pub struct DeltaCover {
    pub nu: usize,
    pub g: i64,
    pub p0: GradedModule,
    pub omega: GradedModule,
    pub inc: ModuleMap,
}

pub fn delta_cover(ctx: &Context, nu: usize, g: i64) -> DeltaCover {
    let p0 = projective(&ctx.alg, nu, g, ctx.horizon);
    let tr = p0.trace(|mu, _| ctx.order.lt(nu, mu));
    let (omega, inc) = p0.submodule(&tr);
    DeltaCover { nu, g, p0, omega, inc }
}

/// Flattens a map between `src` and `dst` over the window `[lo, hi]`,
/// with zero blocks where the map is not stored.
pub fn flatten(map: &ModuleMap, src: &GradedModule, dst: &GradedModule, lo: i64, hi: i64) -> Vec<Scalar> {
    let field = src.field();
    let mut out = Vec::new();
    for j in lo..=hi {
        for v in 0..src.nverts() {
            let (r, c) = (dst.dim_at(v, j), src.dim_at(v, j));
            match map.block(j, v) {
                Some(b) if b.rows() == r && b.cols() == c => {
                    for i in 0..r {
                        for l in 0..c {
                            out.push(b.get(i, l).clone());
                        }
                    }
                }
                _ => out.extend(std::iter::repeat_n(field.zero(), r * c)),
            }
        }
    }
    out
}

/// Rebuilds a map on `[lo, hi]` from flattened coordinates.
pub fn unflatten(x: &[Scalar], src: &GradedModule, dst: &GradedModule, lo: i64, hi: i64) -> ModuleMap {
    let field = src.field();
    let mut pos = 0;
    let mut blocks = Vec::new();
    for j in lo..=hi {
        let mut row = Vec::new();
        for v in 0..src.nverts() {
            let (r, c) = (dst.dim_at(v, j), src.dim_at(v, j));
            let mut b = Matrix::zeros(field, r, c);
            for i in 0..r {
                for l in 0..c {
                    b.set(i, l, x[pos].clone());
                    pos += 1;
                }
            }
            row.push(b);
        }
        blocks.push(row);
    }
    ModuleMap { lo, hi, blocks }
}

/// Common window of two modules.
pub fn common_window(a: &GradedModule, b: &GradedModule) -> (i64, i64) {
    (a.lo().max(b.lo()), a.hi().min(b.hi()))
}

/// Indices of vectors that extend a basis of `span(base)` to a basis of
/// `span(base ∪ cand)`, greedily in order.
pub fn complement_indices(base: &[Vec<Scalar>], cand: &[Vec<Scalar>], len: usize, field: crate::Field) -> Vec<usize> {
    let mut cur: Vec<Vec<Scalar>> = base.to_vec();
    let mut rank = if cur.is_empty() { 0 } else { Matrix::from_cols(field, len, &cur).rank() };
    let mut out = Vec::new();
    for (i, v) in cand.iter().enumerate() {
        cur.push(v.clone());
        let r = Matrix::from_cols(field, len, &cur).rank();
        if r > rank {
            rank = r;
            out.push(i);
        } else {
            cur.pop();
        }
    }
    out
}

/// Cocycles `Ω -> X` representing a basis of `ext^1(Δ(ν)<-g>, X)`.
pub fn ext1_cocycles(ctx: &Context, cover: &DeltaCover, x: &GradedModule) -> Vec<ModuleMap> {
    let field = x.field();
    let (lo, hi) = common_window(&cover.omega, x);
    if lo > hi {
        return Vec::new();
    }
    let hs = hom_space(&cover.omega, x);
    if hs.is_empty() {
        return Vec::new();
    }
    let len = flatten(&hs[0], &cover.omega, x, lo, hi).len();
    let cand: Vec<Vec<Scalar>> = hs.iter().map(|m| flatten(m, &cover.omega, x, lo, hi)).collect();
    let d = x.dim_at(cover.nu, cover.g);
    let free = FreeModule::new(vec![(cover.nu, cover.g)]);
    let base: Vec<Vec<Scalar>> = (0..d)
        .map(|i| {
            let mut e = vec![field.zero(); d];
            e[i] = field.one();
            let f = free_map(&ctx.alg, &free, x, &[e], x.hi());
            let r = ModuleMap::compose(&f, &cover.inc);
            flatten(&r, &cover.omega, x, lo, hi)
        })
        .collect();
    complement_indices(&base, &cand, len, field).into_iter().map(|i| hs[i].clone()).collect()
}

/// Identity map of a module on its window.
pub fn identity_map(m: &GradedModule) -> ModuleMap {
    ModuleMap {
        lo: m.lo(),
        hi: m.hi(),
        blocks: (m.lo()..=m.hi()).map(|j| (0..m.nverts()).map(|v| Matrix::identity(m.field(), m.dim_at(v, j))).collect()).collect(),
    }
}

/// An extension `0 -> X -> Y -> ⊕ Δ(ν)<-g> -> 0`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub module: GradedModule,
    pub inclusion: ModuleMap,
    /// `(ν, g, copies)` for every shifted standard module glued on.
    pub added: Vec<(usize, i64, usize)>,
}

/// Glues one copy of `Δ(ν)<-g>` to `x` per cocycle: the quotient of
/// `X ⊕ ⊕ P(ν)<-g>` by the pairs `(-f(ω), ω)`.
fn extend_by(x: &GradedModule, copies: &[(&DeltaCover, &ModuleMap)]) -> (GradedModule, ModuleMap) {
    if copies.is_empty() {
        return (x.clone(), identity_map(x));
    }
    let field = x.field();
    let mut parts = vec![x.clone()];
    parts.extend(copies.iter().map(|(c, _)| c.p0.clone()));
    let s = GradedModule::direct_sum(&parts).expect("nonempty");
    let basis = (s.lo()..=s.hi())
        .map(|j| {
            (0..s.nverts())
                .map(|v| {
                    let rows = s.dim_at(v, j);
                    let mut off = x.dim_at(v, j);
                    let mut cols = Vec::new();
                    for (cover, f) in copies {
                        let width = cover.p0.dim_at(v, j);
                        let od = cover.omega.dim_at(v, j);
                        if od > 0 {
                            let inc = cover.inc.block(j, v).expect("inside the cover window");
                            let fb = f.block(j, v).filter(|b| b.rows() == x.dim_at(v, j));
                            for e in 0..od {
                                let mut col = vec![field.zero(); rows];
                                if let Some(fb) = fb {
                                    for i in 0..fb.rows() {
                                        col[i] = -fb.get(i, e);
                                    }
                                }
                                for i in 0..width {
                                    col[off + i] = inc.get(i, e).clone();
                                }
                                cols.push(col);
                            }
                        }
                        off += width;
                    }
                    Matrix::from_cols(field, rows, &cols).column_basis()
                })
                .collect()
        })
        .collect();
    let (y, proj) = s.quotient(&Submodule { basis });
    let inclusion = ModuleMap {
        lo: x.lo(),
        hi: x.hi(),
        blocks: (x.lo()..=x.hi())
            .map(|j| {
                (0..x.nverts())
                    .map(|v| {
                        let d = x.dim_at(v, j);
                        match proj.block(j, v) {
                            Some(p) => p.select_cols(&(0..d).collect::<Vec<_>>()),
                            None => Matrix::zeros(field, 0, d),
                        }
                    })
                    .collect()
            })
            .collect(),
    };
    (y, inclusion)
}

/// The universal extension of `x` by the shifted standard modules
/// `Δ(ν)<-g>` listed in `targets`, one copy per basis vector of
/// `ext^1(Δ(ν)<-g>, X)`.
pub fn universal_extension(ctx: &Context, x: &GradedModule, targets: &[(usize, i64)]) -> Result<Extension> {
    let mut covers = Vec::new();
    for &(nu, g) in targets {
        if nu >= ctx.nverts() {
            return Err(Error::Usage(format!("unknown vertex index {nu}")));
        }
        if g < ctx.floor() || g > ctx.horizon {
            return Err(Error::Refused(format!("shift {g} lies outside the computed window")));
        }
        let cover = delta_cover(ctx, nu, g);
        let cs = ext1_cocycles(ctx, &cover, x);
        covers.push((cover, cs));
    }
    let copies: Vec<(&DeltaCover, &ModuleMap)> = covers.iter().flat_map(|(c, cs)| cs.iter().map(move |f| (c, f))).collect();
    let (module, inclusion) = extend_by(x, &copies);
    let added = covers.iter().filter(|(_, cs)| !cs.is_empty()).map(|(c, cs)| (c.nu, c.g, cs.len())).collect();
    Ok(Extension { module, inclusion, added })
}

/// Result of closing a module under universal extensions.
#[derive(Clone, Debug)]
pub struct Closure {
    pub module: GradedModule,
    pub inclusion: ModuleMap,
    /// Standard layers glued on, in order.
    pub added: Vec<Layer>,
    /// False when extensions kept appearing at the edge of the window.
    pub finite: bool,
}

/// Repeatedly glues on shifted standard modules until
/// `ext^1(Δ(μ)<-g>, Y)` vanishes for every vertex and every shift in the
/// window. Classes are handled from maximal to minimal; within a class the
/// lowest shift with a nonzero extension goes first.
pub fn ext_closure(ctx: &Context, start: &GradedModule) -> Result<Closure> {
    let h = ctx.horizon;
    let floor = ctx.floor();
    let mut covers: BTreeMap<(usize, i64), DeltaCover> = BTreeMap::new();
    let mut x = start.clone();
    let mut inclusion = identity_map(start);
    let mut added = Vec::new();
    let mut finite = true;
    let cap = (h - floor + 2) as usize * ctx.nverts() + 4;
    for _ in 0..cap {
        let mut found: Option<(i64, Vec<(usize, Vec<ModuleMap>)>)> = None;
        'scan: for c in (0..ctx.order.num_classes()).rev() {
            for g in floor..h {
                let mut hits = Vec::new();
                for &nu in ctx.order.class_members(c) {
                    let cover = covers.entry((nu, g)).or_insert_with(|| delta_cover(ctx, nu, g));
                    let cs = ext1_cocycles(ctx, cover, &x);
                    if !cs.is_empty() {
                        hits.push((nu, cs));
                    }
                }
                if !hits.is_empty() {
                    found = Some((g, hits));
                    break 'scan;
                }
            }
        }
        let Some((g, hits)) = found else {
            return Ok(Closure { module: x, inclusion, added, finite });
        };
        if g >= h - 1 || g <= floor + 1 {
            finite = false;
        }
        let copies: Vec<(&DeltaCover, &ModuleMap)> = hits
            .iter()
            .flat_map(|(nu, cs)| {
                let cover = &covers[&(*nu, g)];
                cs.iter().map(move |f| (cover, f))
            })
            .collect();
        let (y, inc) = extend_by(&x, &copies);
        for (nu, cs) in &hits {
            for _ in cs {
                added.push(Layer { kind: Kind::Standard, vertex: *nu, shift: -g, degree: g });
            }
        }
        inclusion = ModuleMap::compose(&inc, &inclusion);
        x = y;
    }
    Err(Error::Refused("universal extensions did not stabilize inside the window".into()))
}

/// The indecomposable tilting module `T(λ)` together with its construction.
#[derive(Clone, Debug)]
pub struct TiltingModule {
    pub vertex: usize,
    pub module: GradedModule,
    /// Standard layers in construction order; the first is `Δ(λ)`.
    pub layers: Vec<Layer>,
    /// False when the construction kept extending up to the window edge.
    pub finitely_constructed: bool,
    /// Heuristic: the degree-zero endomorphisms form a local algebra.
    pub indecomposable: bool,
    /// Δ-filtration peeled off the finished module.
    pub filtration: FiltrationReport,
}

impl TiltingModule {
    /// Layer multiplicities keyed by `(vertex, shift)`.
    pub fn multiplicities(&self) -> BTreeMap<(usize, i64), usize> {
        let mut out = BTreeMap::new();
        for l in &self.layers {
            *out.entry((l.vertex, l.shift)).or_insert(0) += 1;
        }
        out
    }

    /// `T(λ)<k>`.
    pub fn shifted(&self, k: i64) -> GradedModule {
        self.module.shift(k)
    }
}

/// Builds `T(λ)` from `Δ(λ)` by iterated universal extensions.
pub fn tilting_module(ctx: &Context, lambda: usize) -> Result<TiltingModule> {
    if lambda >= ctx.nverts() {
        return Err(Error::Usage(format!("unknown vertex index {lambda}")));
    }
    let delta = standard_to(ctx, lambda, ctx.horizon);
    let cl = ext_closure(ctx, &delta)?;
    let mut layers = vec![Layer { kind: Kind::Standard, vertex: lambda, shift: 0, degree: 0 }];
    layers.extend(cl.added);
    let indecomposable = is_local(&cl.module);
    let filtration = delta_filtration(ctx, &cl.module);
    Ok(TiltingModule { vertex: lambda, module: cl.module, layers, finitely_constructed: cl.finite, indecomposable, filtration })
}

/// Semisimple rank of the degree-zero endomorphism algebra, read off the
/// trace form. One means local.
pub fn endomorphism_top_rank(m: &GradedModule) -> usize {
    let ends = hom_space(m, m);
    if ends.len() <= 1 {
        return ends.len();
    }
    let field = m.field();
    let k = ends.len();
    let mut gram = Matrix::zeros(field, k, k);
    for a in 0..k {
        for b in 0..k {
            let mut t = field.zero();
            for (ra, rb) in ends[a].blocks.iter().zip(&ends[b].blocks) {
                for (x, y) in ra.iter().zip(rb) {
                    let p = x.mul(y);
                    for i in 0..p.rows().min(p.cols()) {
                        t = &t + p.get(i, i);
                    }
                }
            }
            gram.set(a, b, t);
        }
    }
    gram.rank()
}

fn is_local(m: &GradedModule) -> bool {
    !m.is_zero() && endomorphism_top_rank(m) == 1
}

/// Position of an algebra in the chain stratified ⊃ weakly adapted ⊃
/// adapted ⊃ balanced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlgebraClass {
    Undetermined,
    NotStratified,
    Stratified,
    WeaklyAdapted,
    Adapted,
    Balanced,
}

impl AlgebraClass {
    pub fn as_str(self) -> &'static str {
        match self {
            AlgebraClass::Undetermined => "undetermined",
            AlgebraClass::NotStratified => "not-stratified",
            AlgebraClass::Stratified => "stratified",
            AlgebraClass::WeaklyAdapted => "weakly-adapted",
            AlgebraClass::Adapted => "adapted",
            AlgebraClass::Balanced => "balanced",
        }
    }
}

/// Outcome of `classify` with the evidence behind each step.
#[derive(Clone, Debug)]
pub struct Classification {
    pub class: AlgebraClass,
    pub stratified: Verdict,
    pub weakly_adapted: Verdict,
    pub adapted: Verdict,
    pub balanced: Verdict,
    pub notes: Vec<String>,
    /// Tilting coresolutions of the standard modules, by vertex.
    pub coresolutions: Vec<Complex>,
    /// Tilting resolutions of the proper costandard modules, by vertex.
    pub resolutions: Vec<Complex>,
}

impl Classification {
    /// Verdict of the strongest property tested: holds only for balanced.
    pub fn verdict(&self) -> Verdict {
        for v in [self.stratified, self.weakly_adapted, self.adapted, self.balanced] {
            if v != Verdict::Holds {
                return v;
            }
        }
        Verdict::Holds
    }
}

/// Nonzero `hom(T(λ)<i>, T(μ))` with `i > 0`, and degree-zero homs other
/// than scalars on the diagonal, as `(λ, μ, i, dim)`.
pub fn grading_defects(ts: &TiltingSet) -> Vec<(usize, usize, i64, usize)> {
    let n = ts.tilts.len();
    let mut out = Vec::new();
    for l in 0..n {
        for m in 0..n {
            let d0 = ts.hom((l, 0), (m, 0)).len();
            if d0 != usize::from(l == m) {
                out.push((l, m, 0, d0));
            }
            for i in 1..=ts.horizon() - 2 {
                let d = ts.hom((l, i), (m, 0)).len();
                if d > 0 {
                    out.push((l, m, i, d));
                }
            }
        }
    }
    out
}

/// Decides stratified / weakly adapted / adapted / balanced at the horizon.
pub fn classify(ctx: &Context) -> Result<Classification> {
    let mut c = Classification {
        class: AlgebraClass::Undetermined,
        stratified: Verdict::Undetermined,
        weakly_adapted: Verdict::Undetermined,
        adapted: Verdict::Undetermined,
        balanced: Verdict::Undetermined,
        notes: Vec::new(),
        coresolutions: Vec::new(),
        resolutions: Vec::new(),
    };
    c.stratified = is_standardly_stratified(ctx).verdict;
    match c.stratified {
        Verdict::Holds => c.class = AlgebraClass::Stratified,
        Verdict::Violated => {
            c.class = AlgebraClass::NotStratified;
            c.notes.push("some kernel K(λ) has no finite standard filtration".into());
            return Ok(c);
        }
        Verdict::Undetermined => {
            c.notes.push("standard filtrations reach the horizon".into());
            return Ok(c);
        }
    }
    let ts = TiltingSet::build(ctx)?;
    let infinite: Vec<usize> = ts.tilts.iter().filter(|t| !t.finitely_constructed).map(|t| t.vertex).collect();
    if !infinite.is_empty() {
        c.weakly_adapted = Verdict::Violated;
        for v in infinite {
            c.notes.push(format!("T({}) is not finitely constructible at N", ctx.vertex_name(v)));
        }
        return Ok(c);
    }
    c.weakly_adapted = Verdict::Holds;
    c.class = AlgebraClass::WeaklyAdapted;
    let defects = grading_defects(&ts);
    if !defects.is_empty() {
        c.adapted = Verdict::Violated;
        for (l, m, i, d) in defects {
            c.notes.push(format!("hom(T({})<{i}>, T({})) has dimension {d}", ctx.vertex_name(l), ctx.vertex_name(m)));
        }
        return Ok(c);
    }
    c.adapted = Verdict::Holds;
    c.class = AlgebraClass::Adapted;
    let mut balanced = Verdict::Holds;
    for v in 0..ctx.nverts() {
        for (kind, out) in [(StratKind::Standard, 0), (StratKind::ProperCostandard, 1)] {
            let m = strat_module(ctx, kind, v);
            let r = if out == 0 { ts.coresolution(&m) } else { ts.resolution(&m) };
            match r {
                Ok(x) => {
                    if !x.is_linear() {
                        balanced = balanced.and(Verdict::Violated);
                        c.notes.push(format!(
                            "the tilting {} of {}({}) is not linear",
                            if out == 0 { "coresolution" } else { "resolution" },
                            kind.kind().symbol(),
                            ctx.vertex_name(v)
                        ));
                    }
                    let cx = x.to_complex(&ts);
                    if out == 0 {
                        c.coresolutions.push(cx);
                    } else {
                        c.resolutions.push(cx);
                    }
                }
                Err(e) => {
                    balanced = balanced.and(Verdict::Undetermined);
                    c.notes.push(e.to_string());
                }
            }
        }
    }
    c.balanced = balanced;
    if balanced == Verdict::Holds {
        c.class = AlgebraClass::Balanced;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::{arrow_loop, commuting_loops, kx};
    use crate::strat::StratOrder;

    pub(crate) fn ctx(p: crate::algebra::Presentation) -> Context {
        let n = p.quiver.vertices.len();
        Context::new(&p, StratOrder::chain(n), 6).unwrap()
    }

    #[test]
    fn commuting_loops_second_tilting_is_shifted_projective() {
        let c = ctx(commuting_loops(6));
        let t = tilting_module(&c, 1).unwrap();
        assert!(t.finitely_constructed);
        assert!(t.indecomposable);
        assert_eq!(t.layers.len(), 2);
        assert_eq!((t.layers[1].vertex, t.layers[1].shift), (0, 1));
        let p = projective(&c.alg, 0, -1, 6);
        assert_eq!(t.module.graded_dims(), p.graded_dims());
        assert!(t.module.satisfies(c.presentation()));
    }

    #[test]
    fn commuting_loops_first_tilting_is_standard() {
        let c = ctx(commuting_loops(6));
        let t = tilting_module(&c, 0).unwrap();
        assert_eq!(t.layers.len(), 1);
        assert_eq!(t.module.graded_dims(), standard_to(&c, 0, 6).graded_dims());
    }

    #[test]
    fn arrow_loop_tilting_is_not_finite() {
        let c = ctx(arrow_loop(6));
        let t = tilting_module(&c, 1).unwrap();
        assert!(!t.finitely_constructed);
        let shifts: Vec<i64> = t.layers[1..].iter().map(|l| l.degree).collect();
        assert_eq!(shifts, (-1..6).collect::<Vec<_>>());
        assert!(t.layers[1..].iter().all(|l| l.vertex == 0));
    }

    #[test]
    fn polynomial_ring_tilting_is_the_ring() {
        let c = ctx(kx(6));
        let t = tilting_module(&c, 0).unwrap();
        assert_eq!(t.module.graded_dims(), projective(&c.alg, 0, 0, 6).graded_dims());
        assert!(t.indecomposable);
    }

    #[test]
    fn extension_dimensions_add_up() {
        let c = ctx(commuting_loops(6));
        let x = standard_to(&c, 1, 6);
        let e = universal_extension(&c, &x, &[(0, -1), (0, 2)]).unwrap();
        assert_eq!(e.added, vec![(0, -1, 1), (0, 2, 1)]);
        let d1 = standard_to(&c, 0, 8);
        for j in -1..=6 {
            for v in 0..2 {
                let expect = x.dim_at(v, j) + d1.dim_at(v, j + 1) + d1.dim_at(v, j - 2);
                assert_eq!(e.module.dim_at(v, j), expect, "v={v} j={j}");
            }
        }
        assert!(e.inclusion.is_homogeneous(&x, &e.module));
    }

    #[test]
    fn classification_of_examples() {
        let c3 = classify(&ctx(commuting_loops(6))).unwrap();
        assert_eq!(c3.class, AlgebraClass::Balanced, "{:?}", c3.notes);
        let c2 = classify(&ctx(arrow_loop(6))).unwrap();
        assert_eq!(c2.class, AlgebraClass::Stratified);
        assert_eq!(c2.weakly_adapted, Verdict::Violated);
        let ck = classify(&ctx(kx(6))).unwrap();
        assert_eq!(ck.class, AlgebraClass::Balanced, "{:?}", ck.notes);
    }
}
