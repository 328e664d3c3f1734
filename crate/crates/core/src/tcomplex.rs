//! Bounded complexes of shifted tilting modules with explicit componentwise
//! differentials: minimal tilting (co)resolutions, chain-map lifting,
//! mapping cones and Gaussian elimination.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use crate::context::Context;
use crate::error::{Error, Result};
use crate::homology::{Complex, Kind, Summand};
use crate::linalg::{Matrix, Scalar};
use crate::module::{hom_space, GradedModule, ModuleMap, Submodule};
use crate::tilting::{common_window, complement_indices, flatten, tilting_module, unflatten, TiltingModule};

/// A summand `T(ν)<k>`, written `(ν, k)`.
pub type Key = (usize, i64);

/// All indecomposable tilting modules of a context, with cached hom spaces
/// between their shifts.
pub struct TiltingSet {
    pub tilts: Vec<TiltingModule>,
    horizon: i64,
    floor: i64,
    zero: GradedModule,
    homs: RefCell<HashMap<(Key, Key), Vec<ModuleMap>>>,
    rads: RefCell<HashMap<(Key, Key), Vec<ModuleMap>>>,
}

impl TiltingSet {
    pub fn build(ctx: &Context) -> Result<TiltingSet> {
        let tilts = (0..ctx.nverts()).map(|v| tilting_module(ctx, v)).collect::<Result<Vec<_>>>()?;
        Ok(TiltingSet {
            tilts,
            horizon: ctx.horizon,
            floor: ctx.floor(),
            zero: ctx.zero_module(),
            homs: RefCell::new(HashMap::new()),
            rads: RefCell::new(HashMap::new()),
        })
    }

    pub fn horizon(&self) -> i64 {
        self.horizon
    }

    pub fn zero(&self) -> &GradedModule {
        &self.zero
    }

    /// True when every `T(λ)` was built without reaching the window edge.
    pub fn all_finite(&self) -> bool {
        self.tilts.iter().all(|t| t.finitely_constructed)
    }

    /// `T(ν)<k>`, stored up to the horizon.
    pub fn module(&self, s: Key) -> GradedModule {
        self.tilts[s.0].module.shift(s.1).truncate_above(self.horizon)
    }

    /// Lowest degree of `T(ν)<k>`.
    pub fn lowest(&self, s: Key) -> i64 {
        self.tilts[s.0].module.bottom().unwrap_or(0) - s.1
    }

    /// Shifted summands whose lowest degree lies comfortably inside the window.
    pub fn candidates(&self) -> Vec<Key> {
        let mut out = Vec::new();
        for v in 0..self.tilts.len() {
            let b = self.tilts[v].module.bottom().unwrap_or(0);
            for low in self.floor..=self.horizon - 2 {
                out.push((v, b - low));
            }
        }
        out
    }

    /// Basis of `hom(T_a, T_b)` on their common window.
    pub fn hom(&self, a: Key, b: Key) -> Vec<ModuleMap> {
        if let Some(h) = self.homs.borrow().get(&(a, b)) {
            return h.clone();
        }
        let h = hom_space(&self.module(a), &self.module(b));
        self.homs.borrow_mut().insert((a, b), h.clone());
        h
    }

    /// Basis of the radical maps `T_a -> T_b`: everything between distinct
    /// summands, and the kernel of the trace form on endomorphisms.
    pub fn rad(&self, a: Key, b: Key) -> Vec<ModuleMap> {
        if let Some(h) = self.rads.borrow().get(&(a, b)) {
            return h.clone();
        }
        let h = self.hom(a, b);
        let r = if a != b || h.is_empty() {
            h
        } else {
            let m = self.module(a);
            let field = m.field();
            let k = h.len();
            let mut gram = Matrix::zeros(field, k, k);
            for x in 0..k {
                for y in 0..k {
                    gram.set(x, y, trace(&ModuleMap::compose(&h[x], &h[y]), field));
                }
            }
            gram.kernel().iter().map(|c| combine(&h, c)).collect()
        };
        self.rads.borrow_mut().insert((a, b), r.clone());
        r
    }
}

fn trace(m: &ModuleMap, field: crate::Field) -> Scalar {
    let mut t = field.zero();
    for b in m.blocks.iter().flatten() {
        for i in 0..b.rows().min(b.cols()) {
            t = &t + b.get(i, i);
        }
    }
    t
}

/// `Σ c_i maps_i` (all on one window).
pub fn combine(maps: &[ModuleMap], c: &[Scalar]) -> ModuleMap {
    let mut acc = maps[0].scale(&c[0]);
    for (m, x) in maps.iter().zip(c).skip(1) {
        acc = acc.add(&m.scale(x));
    }
    acc
}

/// Re-expresses a map on the common window of its source and target,
/// filling zero blocks where it is not stored.
pub fn canon(map: &ModuleMap, src: &GradedModule, dst: &GradedModule) -> ModuleMap {
    let (lo, hi) = common_window(src, dst);
    unflatten(&flatten(map, src, dst, lo, hi), src, dst, lo, hi)
}

/// The zero map on the common window.
pub fn zero_map(src: &GradedModule, dst: &GradedModule) -> ModuleMap {
    let (lo, hi) = common_window(src, dst);
    let n = flatten(&ModuleMap { lo, hi: lo - 1, blocks: vec![] }, src, dst, lo, hi).len();
    unflatten(&vec![src.field().zero(); n], src, dst, lo, hi)
}

/// Assembles a map `⊕ srcs -> ⊕ dsts` from components `comp[b][a]`
/// (`None` is zero).
pub fn assemble(comp: &[Vec<Option<ModuleMap>>], srcs: &[GradedModule], dsts: &[GradedModule], src_sum: &GradedModule, dst_sum: &GradedModule) -> ModuleMap {
    let field = src_sum.field();
    let (lo, hi) = common_window(src_sum, dst_sum);
    let blocks = (lo..=hi)
        .map(|j| {
            (0..src_sum.nverts())
                .map(|v| {
                    let mut m = Matrix::zeros(field, dst_sum.dim_at(v, j), src_sum.dim_at(v, j));
                    let mut r = 0;
                    for (b, d) in dsts.iter().enumerate() {
                        let rows = d.dim_at(v, j);
                        let mut c = 0;
                        for (a, s) in srcs.iter().enumerate() {
                            let cols = s.dim_at(v, j);
                            if let Some(Some(f)) = comp.get(b).and_then(|row| row.get(a)) {
                                if let Some(blk) = f.block(j, v) {
                                    if blk.rows() == rows && blk.cols() == cols {
                                        m.paste(r, c, blk);
                                    }
                                }
                            }
                            c += cols;
                        }
                        r += rows;
                    }
                    m
                })
                .collect()
        })
        .collect();
    ModuleMap { lo, hi, blocks }
}

/// The `(b, a)` component of a map between direct sums.
pub fn component(map: &ModuleMap, srcs: &[GradedModule], dsts: &[GradedModule], a: usize, b: usize) -> ModuleMap {
    let field = srcs[a].field();
    let (lo, hi) = common_window(&srcs[a], &dsts[b]);
    let blocks = (lo..=hi)
        .map(|j| {
            (0..srcs[a].nverts())
                .map(|v| {
                    let c0: usize = srcs[..a].iter().map(|s| s.dim_at(v, j)).sum();
                    let r0: usize = dsts[..b].iter().map(|s| s.dim_at(v, j)).sum();
                    let (rows, cols) = (dsts[b].dim_at(v, j), srcs[a].dim_at(v, j));
                    match map.block(j, v) {
                        Some(m) if m.rows() >= r0 + rows && m.cols() >= c0 + cols => m.block(r0, r0 + rows, c0, c0 + cols),
                        _ => Matrix::zeros(field, rows, cols),
                    }
                })
                .collect()
        })
        .collect();
    ModuleMap { lo, hi, blocks }
}

/// Direct sum of a list of modules; an empty list gives `zero`.
pub fn sum_of(parts: &[GradedModule], zero: &GradedModule) -> GradedModule {
    GradedModule::direct_sum(parts).unwrap_or_else(|| zero.clone())
}

/// The image of a map as a submodule of its target.
pub fn image(map: &ModuleMap, dst: &GradedModule) -> Submodule {
    let field = dst.field();
    Submodule {
        basis: (dst.lo()..=dst.hi())
            .map(|j| {
                (0..dst.nverts())
                    .map(|v| match map.block(j, v) {
                        Some(m) if m.rows() == dst.dim_at(v, j) => m.column_basis(),
                        _ => Matrix::zeros(field, dst.dim_at(v, j), 0),
                    })
                    .collect()
            })
            .collect(),
    }
}

/// Blockwise inverse, if every block is square and invertible.
pub fn invert(map: &ModuleMap) -> Option<ModuleMap> {
    let blocks = map
        .blocks
        .iter()
        .map(|row| row.iter().map(|b| if b.rows() == b.cols() { b.inverse() } else { None }).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    Some(ModuleMap { lo: map.lo, hi: map.hi, blocks })
}

/// Shifts a map along with its modules: `f<k>`.
pub fn shift_map(map: &ModuleMap, k: i64) -> ModuleMap {
    ModuleMap { lo: map.lo - k, hi: map.hi - k, blocks: map.blocks.clone() }
}

/// True when the module vanishes in every degree below `h - 1`.
pub fn negligible(m: &GradedModule, h: i64) -> bool {
    (m.lo()..=m.hi().min(h - 2)).all(|j| m.total_dim(j) == 0)
}

/// Flattened maps `a -> b` for comparison and linear algebra.
pub fn flat(map: &ModuleMap, src: &GradedModule, dst: &GradedModule) -> Vec<Scalar> {
    let (lo, hi) = common_window(src, dst);
    flatten(map, src, dst, lo, hi)
}

/// A minimal add(T)-approximation: summands and the chosen maps.
#[derive(Clone, Debug, Default)]
pub struct Approx {
    pub summands: Vec<Key>,
    pub maps: Vec<ModuleMap>,
}

impl TiltingSet {
    /// Minimal right approximation `⊕ T_s -> M`: for each candidate, maps
    /// `T_s -> M` modulo those factoring through radical maps.
    pub fn right_approx(&self, m: &GradedModule) -> Approx {
        let field = m.field();
        let hs: Vec<(Key, GradedModule, Vec<ModuleMap>)> = self
            .candidates()
            .into_iter()
            .filter_map(|c| {
                let t = self.module(c);
                let h = hom_space(&t, m);
                (!h.is_empty()).then_some((c, t, h))
            })
            .collect();
        let mut out = Approx::default();
        for (c, t, h) in &hs {
            let mut base = Vec::new();
            for (c2, _, h2) in &hs {
                for r in self.rad(*c, *c2) {
                    for f in h2 {
                        base.push(flat(&ModuleMap::compose(f, &r), t, m));
                    }
                }
            }
            let cand: Vec<Vec<Scalar>> = h.iter().map(|f| flat(f, t, m)).collect();
            let len = cand[0].len();
            for i in complement_indices(&base, &cand, len, field) {
                out.summands.push(*c);
                out.maps.push(canon(&h[i], t, m));
            }
        }
        out
    }

    /// Minimal left approximation `M -> ⊕ T_s`.
    pub fn left_approx(&self, m: &GradedModule) -> Approx {
        let field = m.field();
        let hs: Vec<(Key, GradedModule, Vec<ModuleMap>)> = self
            .candidates()
            .into_iter()
            .filter_map(|c| {
                let t = self.module(c);
                let h = hom_space(m, &t);
                (!h.is_empty()).then_some((c, t, h))
            })
            .collect();
        let mut out = Approx::default();
        for (c, t, h) in &hs {
            let mut base = Vec::new();
            for (c2, _, h2) in &hs {
                for r in self.rad(*c2, *c) {
                    for f in h2 {
                        base.push(flat(&ModuleMap::compose(&r, f), m, t));
                    }
                }
            }
            let cand: Vec<Vec<Scalar>> = h.iter().map(|f| flat(f, m, t)).collect();
            let len = cand[0].len();
            for i in complement_indices(&base, &cand, len, field) {
                out.summands.push(*c);
                out.maps.push(canon(&h[i], m, t));
            }
        }
        out
    }
}

/// A bounded complex of shifted tilting modules.
#[derive(Clone, Debug, Default)]
pub struct TComplex {
    pub terms: BTreeMap<i64, Vec<Key>>,
    /// `diffs[i][b][a]` maps summand `a` at position `i` to summand `b` at
    /// position `i + 1`; `None` is zero.
    pub diffs: BTreeMap<i64, Vec<Vec<Option<ModuleMap>>>>,
    /// Module receiving the augmentation out of position 0, if any.
    pub target: Option<GradedModule>,
    pub aug: Vec<Option<ModuleMap>>,
}

impl TComplex {
    pub fn term(&self, i: i64) -> &[Key] {
        self.terms.get(&i).map_or(&[], Vec::as_slice)
    }

    /// Nonzero positions in increasing order.
    pub fn positions(&self) -> Vec<i64> {
        self.terms.iter().filter(|(_, s)| !s.is_empty()).map(|(&i, _)| i).collect()
    }

    pub fn diff(&self, i: i64, b: usize, a: usize) -> Option<&ModuleMap> {
        self.diffs.get(&i)?.get(b)?.get(a)?.as_ref()
    }

    pub fn modules(&self, ts: &TiltingSet, i: i64) -> Vec<GradedModule> {
        self.term(i).iter().map(|&s| ts.module(s)).collect()
    }

    /// Each summand at position `i` is `T(ν)<i>`.
    pub fn is_linear(&self) -> bool {
        self.terms.iter().all(|(&i, s)| s.iter().all(|&(_, k)| k == i))
    }

    /// The differential out of position `i` as one map between direct sums.
    pub fn assembled(&self, ts: &TiltingSet, i: i64) -> (GradedModule, GradedModule, ModuleMap) {
        let (srcs, dsts) = (self.modules(ts, i), self.modules(ts, i + 1));
        let (x, y) = (sum_of(&srcs, ts.zero()), sum_of(&dsts, ts.zero()));
        let comp: Vec<Vec<Option<ModuleMap>>> = (0..dsts.len()).map(|b| (0..srcs.len()).map(|a| self.diff(i, b, a).cloned()).collect()).collect();
        let d = assemble(&comp, &srcs, &dsts, &x, &y);
        (x, y, d)
    }

    /// The named complex with realized terms and differentials.
    pub fn to_complex(&self, ts: &TiltingSet) -> Complex {
        let mut c = Complex::from_terms(
            self.terms
                .iter()
                .filter(|(_, s)| !s.is_empty())
                .map(|(&i, s)| (i, s.iter().map(|&(v, k)| Summand { kind: Kind::Tilting, vertex: v, shift: k }).collect()))
                .collect(),
        );
        for i in self.positions() {
            let (x, _, d) = self.assembled(ts, i);
            c.modules.insert(i, x);
            if !self.term(i + 1).is_empty() {
                c.diffs.insert(i, d);
            }
        }
        c
    }

    pub fn d_squared_zero(&self, ts: &TiltingSet) -> bool {
        self.positions().iter().all(|&i| {
            let (_, _, d0) = self.assembled(ts, i);
            let (_, _, d1) = self.assembled(ts, i + 1);
            ModuleMap::compose(&d1, &d0).is_zero()
        })
    }

    /// Graded dimensions of the homology at every position, over the
    /// degrees where all terms are known and away from the horizon.
    pub fn homology_dims(&self, ts: &TiltingSet) -> BTreeMap<i64, Vec<(i64, Vec<usize>)>> {
        let pos = self.positions();
        let mut out = BTreeMap::new();
        let Some(&first) = pos.first() else { return out };
        let mods: BTreeMap<i64, (GradedModule, ModuleMap)> = (first - 1..=*pos.last().unwrap())
            .map(|i| {
                let (x, _, d) = self.assembled(ts, i);
                (i, (x, d))
            })
            .collect();
        let lo = pos.iter().map(|i| mods[i].0.lo()).min().unwrap();
        let hi = pos.iter().map(|i| mods[i].0.hi()).min().unwrap().min(ts.horizon - 2);
        let n = ts.zero().nverts();
        let rank = |d: &ModuleMap, j: i64, v: usize| d.block(j, v).map_or(0, Matrix::rank);
        for &i in &pos {
            let (x, d) = &mods[&i];
            let prev = &mods[&(i - 1)].1;
            let dims: Vec<(i64, Vec<usize>)> = (lo..=hi)
                .map(|j| (j, (0..n).map(|v| x.dim_at(v, j) - rank(d, j, v) - rank(prev, j, v)).collect::<Vec<_>>()))
                .filter(|(_, d)| d.iter().any(|&x| x > 0))
                .collect();
            out.insert(i, dims);
        }
        out
    }

    /// Grading shift `<k>` of every summand, map and the target.
    pub fn shifted(&self, k: i64) -> TComplex {
        TComplex {
            terms: self.terms.iter().map(|(&i, s)| (i, s.iter().map(|&(v, x)| (v, x + k)).collect())).collect(),
            diffs: self
                .diffs
                .iter()
                .map(|(&i, rows)| (i, rows.iter().map(|r| r.iter().map(|m| m.as_ref().map(|m| shift_map(m, k))).collect()).collect()))
                .collect(),
            target: self.target.as_ref().map(|t| t.shift(k)),
            aug: self.aug.iter().map(|m| m.as_ref().map(|m| shift_map(m, k))).collect(),
        }
    }

    /// Direct sum of complexes; targets are summed as well.
    pub fn direct_sum(parts: &[TComplex], ts: &TiltingSet) -> TComplex {
        let mut out = TComplex::default();
        let positions: std::collections::BTreeSet<i64> = parts.iter().flat_map(|p| p.positions()).collect();
        for &i in &positions {
            out.terms.insert(i, parts.iter().flat_map(|p| p.term(i).to_vec()).collect());
        }
        for &i in &positions {
            let rows = out.term(i + 1).len();
            let cols = out.term(i).len();
            let mut m = vec![vec![None; cols]; rows];
            let (mut r0, mut c0) = (0, 0);
            for p in parts {
                for b in 0..p.term(i + 1).len() {
                    for a in 0..p.term(i).len() {
                        m[r0 + b][c0 + a] = p.diff(i, b, a).cloned();
                    }
                }
                r0 += p.term(i + 1).len();
                c0 += p.term(i).len();
            }
            out.diffs.insert(i, m);
        }
        let targets: Vec<GradedModule> = parts.iter().filter_map(|p| p.target.clone()).collect();
        if targets.len() == parts.len() && !parts.is_empty() {
            let sum = sum_of(&targets, ts.zero());
            let mut aug = Vec::new();
            for (pi, p) in parts.iter().enumerate() {
                for (a, &s) in p.term(0).iter().enumerate() {
                    let src = ts.module(s);
                    let comp: Vec<Vec<Option<ModuleMap>>> =
                        (0..parts.len()).map(|b| vec![if b == pi { p.aug.get(a).cloned().flatten() } else { None }]).collect();
                    aug.push(Some(assemble(&comp, std::slice::from_ref(&src), &targets, &src, &sum)));
                }
            }
            out.target = Some(sum);
            out.aug = aug;
        }
        out
    }
}

impl TiltingSet {
    /// The minimal tilting resolution `... -> X^{-1} -> X^0 -> M` by
    /// iterated right approximations; fails if some approximation is not
    /// onto.
    pub fn resolution(&self, m: &GradedModule) -> Result<TComplex> {
        let h = self.horizon;
        let mut out = TComplex { target: Some(m.clone()), ..Default::default() };
        let mut cur = m.clone();
        let mut into_prev: Option<(ModuleMap, Vec<GradedModule>)> = None;
        for step in 0..(self.tilts.len() + 3) as i64 {
            let pos = -step;
            if negligible(&cur, h) {
                return Ok(out);
            }
            let ap = self.right_approx(&cur);
            let mods: Vec<GradedModule> = ap.summands.iter().map(|&s| self.module(s)).collect();
            let x = sum_of(&mods, &self.zero);
            let comp = vec![ap.maps.iter().cloned().map(Some).collect::<Vec<_>>()];
            let psi = assemble(&comp, &mods, &[cur.clone()], &x, &cur);
            for j in cur.lo()..=cur.hi().min(h - 2) {
                for v in 0..cur.nverts() {
                    let r = psi.block(j, v).map_or(0, Matrix::rank);
                    if r != cur.dim_at(v, j) {
                        return Err(Error::Refused(format!("no tilting cover at position {pos}, degree {j}")));
                    }
                }
            }
            out.terms.insert(pos, ap.summands.clone());
            match &into_prev {
                None => out.aug = ap.maps.iter().cloned().map(Some).collect(),
                Some((inc, prev)) => {
                    let full = ModuleMap::compose(inc, &psi);
                    let d = (0..prev.len()).map(|b| (0..mods.len()).map(|a| Some(component(&full, &mods, prev, a, b))).collect()).collect();
                    out.diffs.insert(pos, d);
                }
            }
            let ker = psi.kernel(&x);
            let (k, kinc) = x.submodule(&ker);
            cur = k.truncate_above(h);
            into_prev = Some((kinc, mods));
        }
        Err(Error::Refused("tilting resolution did not terminate".into()))
    }

    /// The minimal tilting coresolution `M -> X^0 -> X^1 -> ...` by iterated
    /// left approximations; fails if some approximation is not injective.
    pub fn coresolution(&self, m: &GradedModule) -> Result<TComplex> {
        let h = self.horizon;
        let mut out = TComplex::default();
        let mut cur = m.clone();
        let mut from_prev: Option<(ModuleMap, Vec<GradedModule>)> = None;
        for pos in 0..(self.tilts.len() + 3) as i64 {
            if negligible(&cur, h) {
                return Ok(out);
            }
            let ap = self.left_approx(&cur);
            let mods: Vec<GradedModule> = ap.summands.iter().map(|&s| self.module(s)).collect();
            let x = sum_of(&mods, &self.zero);
            let comp: Vec<Vec<Option<ModuleMap>>> = ap.maps.iter().map(|f| vec![Some(f.clone())]).collect();
            let phi = assemble(&comp, &[cur.clone()], &mods, &cur, &x);
            for j in cur.lo()..=cur.hi().min(h - 2) {
                for v in 0..cur.nverts() {
                    let r = phi.block(j, v).map_or(0, Matrix::rank);
                    if r != cur.dim_at(v, j) {
                        return Err(Error::Refused(format!("no tilting envelope at position {pos}, degree {j}")));
                    }
                }
            }
            out.terms.insert(pos, ap.summands.clone());
            if let Some((proj, prev)) = &from_prev {
                let full = ModuleMap::compose(&phi, proj);
                let d = (0..mods.len()).map(|b| (0..prev.len()).map(|a| Some(component(&full, prev, &mods, a, b))).collect()).collect();
                out.diffs.insert(pos - 1, d);
            }
            let (c, cproj) = x.quotient(&image(&phi, &x));
            cur = c.truncate_above(h);
            from_prev = Some((cproj, mods));
        }
        Err(Error::Refused("tilting coresolution did not terminate".into()))
    }
}

/// Components of a chain map, keyed by position: `maps[i][b][a]`.
pub type ChainMap = BTreeMap<i64, Vec<Vec<Option<ModuleMap>>>>;

/// `-f`.
pub fn negate(f: &ModuleMap) -> ModuleMap {
    ModuleMap { lo: f.lo, hi: f.hi, blocks: f.blocks.iter().map(|r| r.iter().map(|b| b.scale(&-&b.field().one())).collect()).collect() }
}

/// `x - y` on the common window of `src` and `dst`.
fn sub_canon(x: Option<&ModuleMap>, y: &ModuleMap, src: &GradedModule, dst: &GradedModule) -> ModuleMap {
    let y = negate(&canon(y, src, dst));
    match x {
        Some(x) => canon(x, src, dst).add(&y),
        None => y,
    }
}

impl TiltingSet {
    /// Solves for a chain map `f: X -> Y` with `ε_Y f^0 = g ε_X`, where `g`
    /// goes from the target of `X` to the target of `Y`.
    pub fn lift(&self, x: &TComplex, y: &TComplex, g: &ModuleMap) -> Result<ChainMap> {
        let (Some(xt), Some(yt)) = (&x.target, &y.target) else {
            return Err(Error::Usage("lifting needs augmented complexes".into()));
        };
        let field = xt.field();
        // Equation blocks: (kind, i, a, c) with their source and target.
        let mut blocks: Vec<(i64, usize, Option<usize>)> = Vec::new();
        let mut offsets = Vec::new();
        let mut total = 0;
        let mut index: HashMap<(i64, usize, Option<usize>), usize> = HashMap::new();
        for i in x.positions() {
            for (a, &sa) in x.term(i).iter().enumerate() {
                let src = self.module(sa);
                for (c, &sc) in y.term(i + 1).iter().enumerate() {
                    let (lo, hi) = common_window(&src, &self.module(sc));
                    let len = flatten(&ModuleMap { lo, hi: lo - 1, blocks: vec![] }, &src, &self.module(sc), lo, hi).len();
                    index.insert((i, a, Some(c)), blocks.len());
                    blocks.push((i, a, Some(c)));
                    offsets.push(total);
                    total += len;
                }
                if i == 0 {
                    let (lo, hi) = common_window(&src, yt);
                    let len = flatten(&ModuleMap { lo, hi: lo - 1, blocks: vec![] }, &src, yt, lo, hi).len();
                    index.insert((0, a, None), blocks.len());
                    blocks.push((0, a, None));
                    offsets.push(total);
                    total += len;
                }
            }
        }
        let put = |col: &mut Vec<Scalar>, key: (i64, usize, Option<usize>), v: Vec<Scalar>, sign: bool| {
            let o = offsets[index[&key]];
            for (k, s) in v.into_iter().enumerate() {
                col[o + k] = if sign { &col[o + k] + &s } else { &col[o + k] - &s };
            }
        };
        let mut vars: Vec<(i64, usize, usize, ModuleMap)> = Vec::new();
        let mut cols = Vec::new();
        for i in x.positions() {
            for (a, &sa) in x.term(i).iter().enumerate() {
                let ta = self.module(sa);
                for (b, &sb) in y.term(i).iter().enumerate() {
                    let tb = self.module(sb);
                    for h in self.hom(sa, sb) {
                        let mut col = vec![field.zero(); total];
                        for (c, &sc) in y.term(i + 1).iter().enumerate() {
                            if let Some(d) = y.diff(i, c, b) {
                                put(&mut col, (i, a, Some(c)), flat(&ModuleMap::compose(d, &h), &ta, &self.module(sc)), true);
                            }
                        }
                        for (a0, &s0) in x.term(i - 1).iter().enumerate() {
                            if let Some(d) = x.diff(i - 1, a, a0) {
                                put(&mut col, (i - 1, a0, Some(b)), flat(&ModuleMap::compose(&h, d), &self.module(s0), &tb), false);
                            }
                        }
                        if i == 0 {
                            if let Some(Some(e)) = y.aug.get(b) {
                                put(&mut col, (0, a, None), flat(&ModuleMap::compose(e, &h), &ta, yt), true);
                            }
                        }
                        cols.push(col);
                        vars.push((i, a, b, canon(&h, &ta, &tb)));
                    }
                }
            }
        }
        let mut rhs = vec![field.zero(); total];
        for (a, &sa) in x.term(0).iter().enumerate() {
            if let Some(Some(e)) = x.aug.get(a) {
                let ta = self.module(sa);
                put(&mut rhs, (0, a, None), flat(&ModuleMap::compose(g, e), &ta, yt), true);
            }
        }
        let sol =
            if cols.is_empty() { rhs.iter().all(Scalar::is_zero).then(Vec::new) } else { Matrix::from_cols(field, total, &cols).solve(&rhs)?.map(|(s, _)| s) };
        let Some(sol) = sol else {
            return Err(Error::Refused("no chain map lifts the given module map".into()));
        };
        let mut out: ChainMap = BTreeMap::new();
        for i in x.positions() {
            out.insert(i, vec![vec![None; x.term(i).len()]; y.term(i).len()]);
        }
        for ((i, a, b, h), c) in vars.into_iter().zip(sol) {
            if c.is_zero() {
                continue;
            }
            let slot = &mut out.get_mut(&i).unwrap()[b][a];
            let term = h.scale(&c);
            *slot = Some(match slot.take() {
                Some(prev) => prev.add(&term),
                None => term,
            });
        }
        Ok(out)
    }

    /// Gaussian elimination of every isomorphism between equal summands in
    /// adjacent positions.
    pub fn minimalize(&self, c: &mut TComplex) {
        while let Some((i, a, b, inv)) = self.find_iso(c) {
            let src = c.term(i).to_vec();
            let dst = c.term(i + 1).to_vec();
            let d = c.diffs.get(&i).cloned().unwrap_or_default();
            // New differential out of position i.
            let mut nd = Vec::new();
            for (r, &sr) in dst.iter().enumerate() {
                if r == b {
                    continue;
                }
                let mut row = Vec::new();
                for (q, &sq) in src.iter().enumerate() {
                    if q == a {
                        continue;
                    }
                    let base = d[r][q].as_ref();
                    let new = match (&d[r][a], &d[b][q]) {
                        (Some(gam), Some(bet)) => {
                            let t = ModuleMap::compose(gam, &ModuleMap::compose(&inv, bet));
                            Some(sub_canon(base, &t, &self.module(sq), &self.module(sr)))
                        }
                        _ => base.cloned(),
                    };
                    row.push(new);
                }
                nd.push(row);
            }
            if i == 0 && c.target.is_some() {
                let t = c.target.clone().unwrap();
                let mut aug = Vec::new();
                for (q, &sq) in src.iter().enumerate() {
                    if q == a {
                        continue;
                    }
                    let base = c.aug.get(q).cloned().flatten();
                    let new = match (c.aug.get(a).cloned().flatten(), &d[b][q]) {
                        (Some(ea), Some(bet)) => {
                            let x = ModuleMap::compose(&ea, &ModuleMap::compose(&inv, bet));
                            Some(sub_canon(base.as_ref(), &x, &self.module(sq), &t))
                        }
                        _ => base,
                    };
                    aug.push(new);
                }
                c.aug = aug;
            }
            if i + 1 == 0 && !c.aug.is_empty() {
                c.aug.remove(b);
            }
            c.diffs.insert(i, nd);
            if let Some(prev) = c.diffs.get_mut(&(i - 1)) {
                prev.remove(a);
            }
            if let Some(next) = c.diffs.get_mut(&(i + 1)) {
                for row in next.iter_mut() {
                    row.remove(b);
                }
            }
            c.terms.get_mut(&i).unwrap().remove(a);
            c.terms.get_mut(&(i + 1)).unwrap().remove(b);
        }
        c.terms.retain(|_, s| !s.is_empty());
    }

    fn find_iso(&self, c: &TComplex) -> Option<(i64, usize, usize, ModuleMap)> {
        for i in c.positions() {
            for (a, &sa) in c.term(i).iter().enumerate() {
                for (b, &sb) in c.term(i + 1).iter().enumerate() {
                    if sa != sb {
                        continue;
                    }
                    if let Some(d) = c.diff(i, b, a) {
                        let m = self.module(sa);
                        if let Some(inv) = invert(&canon(d, &m, &m)) {
                            if !m.is_zero() {
                                return Some((i, a, b, inv));
                            }
                        }
                    }
                }
            }
        }
        None
    }
}

/// `cone(f)[-1]`: position `i` holds `X^i ⊕ Y^{i-1}` with differential
/// `(x, y) ↦ (d x, f x - d y)`. The augmentation is that of `X`.
pub fn cone_shifted(x: &TComplex, y: &TComplex, f: &ChainMap) -> TComplex {
    let mut out = TComplex { target: x.target.clone(), ..Default::default() };
    let mut pos: std::collections::BTreeSet<i64> = x.positions().into_iter().collect();
    pos.extend(y.positions().into_iter().map(|i| i + 1));
    for &i in &pos {
        let mut t = x.term(i).to_vec();
        t.extend_from_slice(y.term(i - 1));
        out.terms.insert(i, t);
    }
    for &i in &pos {
        let (nx0, ny0) = (x.term(i).len(), y.term(i - 1).len());
        let (nx1, ny1) = (x.term(i + 1).len(), y.term(i).len());
        let mut d = vec![vec![None; nx0 + ny0]; nx1 + ny1];
        for b in 0..nx1 {
            for a in 0..nx0 {
                d[b][a] = x.diff(i, b, a).cloned();
            }
        }
        for b in 0..ny1 {
            for a in 0..nx0 {
                d[nx1 + b][a] = f.get(&i).and_then(|m| m.get(b)).and_then(|r| r.get(a)).cloned().flatten();
            }
            for a in 0..ny0 {
                d[nx1 + b][nx0 + a] = y.diff(i - 1, b, a).map(negate);
            }
        }
        out.diffs.insert(i, d);
    }
    out.aug = x.aug.clone();
    out.aug.extend(std::iter::repeat_n(None, y.term(-1).len()));
    out
}

impl TiltingSet {
    /// The minimal complex of tilting modules quasi-isomorphic to `L(λ)`,
    /// built by induction along the order from tilting resolutions of
    /// proper costandard modules. The augmentation lands in `∇̄(λ)`.
    pub fn simple_complex(&self, ctx: &Context, lambda: usize, memo: &mut BTreeMap<usize, TComplex>) -> Result<TComplex> {
        self.simple_complex_rec(ctx, lambda, memo, &mut Vec::new())
    }

    fn simple_complex_rec(&self, ctx: &Context, lambda: usize, memo: &mut BTreeMap<usize, TComplex>, stack: &mut Vec<usize>) -> Result<TComplex> {
        if let Some(c) = memo.get(&lambda) {
            return Ok(c.clone());
        }
        if stack.contains(&lambda) {
            return Err(Error::Refused(format!("simple module {lambda} depends on itself")));
        }
        stack.push(lambda);
        let nab = crate::strat::strat_module(ctx, crate::strat::StratKind::ProperCostandard, lambda);
        let cn = self.resolution(&nab)?;
        let (soc, _) = nab.socle();
        let (q, pi) = nab.quotient(&soc);
        let mut result = if q.is_zero() {
            cn
        } else {
            let (y, g) = if q.radical().dim() == 0 { self.semisimple_complex(ctx, &q, &pi, memo, stack)? } else { (self.resolution(&q)?, pi.clone()) };
            let f = self.lift(&cn, &y, &g)?;
            cone_shifted(&cn, &y, &f)
        };
        self.minimalize(&mut result);
        stack.pop();
        memo.insert(lambda, result.clone());
        Ok(result)
    }

    /// Complex for a semisimple quotient `q = ⊕ L(v)<-j>` of `∇̄(λ)`, with
    /// the composite `∇̄(λ) -> q -> ⊕ ∇̄(v)<-j>`.
    fn semisimple_complex(
        &self,
        ctx: &Context,
        q: &GradedModule,
        pi: &ModuleMap,
        memo: &mut BTreeMap<usize, TComplex>,
        stack: &mut Vec<usize>,
    ) -> Result<(TComplex, ModuleMap)> {
        let mut parts = Vec::new();
        let mut picks = Vec::new();
        for j in q.lo()..=q.hi() {
            for v in 0..q.nverts() {
                for r in 0..q.dim_at(v, j) {
                    let base = self.simple_complex_rec(ctx, v, memo, stack)?;
                    parts.push(base.shifted(-j));
                    picks.push((v, j, r));
                }
            }
        }
        let y = TComplex::direct_sum(&parts, self);
        let targets: Vec<GradedModule> = parts.iter().map(|p| p.target.clone().expect("augmented")).collect();
        let yt = y.target.clone().expect("augmented");
        let comp: Vec<Vec<Option<ModuleMap>>> = targets
            .iter()
            .zip(&picks)
            .map(|(t, &(v, j, r))| {
                let (soc, _) = t.socle();
                let col = soc.basis[(j - t.lo()) as usize][v].col(0);
                let (lo, hi) = common_window(q, t);
                let mut m = unflatten(&flat(&zero_map(q, t), q, t), q, t, lo, hi);
                let blk = &mut m.blocks[(j - lo) as usize][v];
                for (i, x) in col.into_iter().enumerate() {
                    blk.set(i, r, x);
                }
                vec![Some(m)]
            })
            .collect();
        let iota = assemble(&comp, std::slice::from_ref(q), &targets, q, &yt);
        Ok((y, ModuleMap::compose(&iota, pi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::commuting_loops;
    use crate::strat::{strat_module, StratKind, StratOrder};

    fn setup() -> (Context, TiltingSet) {
        let c = Context::new(&commuting_loops(6), StratOrder::chain(2), 6).unwrap();
        let ts = TiltingSet::build(&c).unwrap();
        (c, ts)
    }

    fn terms(x: &TComplex) -> Vec<(i64, Vec<Key>)> {
        x.terms.iter().filter(|(_, s)| !s.is_empty()).map(|(&i, s)| (i, s.clone())).collect()
    }

    #[test]
    fn commuting_loops_coresolutions_of_standards() {
        let (c, ts) = setup();
        let d1 = ts.coresolution(&strat_module(&c, StratKind::Standard, 0)).unwrap();
        assert_eq!(terms(&d1), vec![(0, vec![(0, 0)])]);
        let d2 = ts.coresolution(&strat_module(&c, StratKind::Standard, 1)).unwrap();
        assert_eq!(terms(&d2), vec![(0, vec![(1, 0)]), (1, vec![(0, 1)])]);
        assert!(d2.d_squared_zero(&ts));
        assert!(d2.is_linear());
    }

    #[test]
    fn commuting_loops_resolutions_of_proper_costandards() {
        let (c, ts) = setup();
        let n1 = ts.resolution(&strat_module(&c, StratKind::ProperCostandard, 0)).unwrap();
        assert_eq!(terms(&n1), vec![(-1, vec![(0, -1)]), (0, vec![(0, 0)])]);
        let n2 = ts.resolution(&strat_module(&c, StratKind::ProperCostandard, 1)).unwrap();
        assert_eq!(terms(&n2), vec![(-1, vec![(1, -1)]), (0, vec![(1, 0)])]);
        assert!(n2.d_squared_zero(&ts));
        let h = n2.homology_dims(&ts);
        assert!(h[&-1].is_empty());
        assert_eq!(h[&0], vec![(-1, vec![1, 0]), (0, vec![0, 1])]);
    }

    #[test]
    fn commuting_loops_simple_complexes_are_linear() {
        let (c, ts) = setup();
        let mut memo = BTreeMap::new();
        let l1 = ts.simple_complex(&c, 0, &mut memo).unwrap();
        assert_eq!(terms(&l1), vec![(-1, vec![(0, -1)]), (0, vec![(0, 0)])]);
        let l2 = ts.simple_complex(&c, 1, &mut memo).unwrap();
        let mut t = terms(&l2);
        for (_, s) in t.iter_mut() {
            s.sort();
        }
        assert_eq!(t, vec![(-1, vec![(1, -1)]), (0, vec![(0, 0), (1, 0)]), (1, vec![(0, 1)])]);
        assert!(l2.is_linear());
        assert!(l2.d_squared_zero(&ts));
        let h = l2.homology_dims(&ts);
        assert_eq!(h[&0], vec![(0, vec![0, 1])]);
        assert!(h[&-1].is_empty() && h[&1].is_empty());
    }
}
