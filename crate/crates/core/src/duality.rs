//! Ringel and Koszul duals as truncated graded presentations, bounded
//! isomorphism search between presentations, and the commutativity check.

use std::collections::HashMap;

use crate::algebra::{build_algebra_to, Arrow, Presentation, Quiver, Relation};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::homology::{is_koszul, minimal_projective_resolution, Resolution};
use crate::linalg::{Field, Matrix, Scalar};
use crate::module::{hom_space, shapes_of, GradedModule, ModuleMap};
use crate::projective::{free_map, simple, FreeModule};
use crate::strat::{standard_to, StratOrder, Verdict};
use crate::tcomplex::{shift_map, TiltingSet};
use crate::tilting::{classify, common_window, complement_indices, grading_defects, AlgebraClass, Classification};

/// Finite graded structure constants: `dim(s, t, d)` is the space of
/// degree-`d` elements from `s` to `t`, and `mul` concatenates (first
/// factor on the left).
pub trait Structure {
    fn nverts(&self) -> usize;
    fn field(&self) -> Field;
    fn dim(&self, s: usize, t: usize, d: usize) -> usize;
    #[allow(clippy::too_many_arguments)]
    fn mul(&self, s: usize, t: usize, d: usize, x: &[Scalar], u: usize, e: usize, y: &[Scalar]) -> Result<Vec<Scalar>>;
}

/// A presentation computed from structure constants, with its graded
/// Cartan matrices and stratification order.
#[derive(Clone, Debug)]
pub struct PresentationOut {
    pub presentation: Presentation,
    /// `cartan[d][μ][λ] = dim e_μ B_d e_λ`.
    pub cartan: Vec<Vec<Vec<usize>>>,
    /// Degrees up to which generators, relations and dimensions are exact.
    pub reliable_degree: usize,
    pub order: StratOrder,
    /// Each arrow as coordinates in the structure's basis.
    pub arrow_values: Vec<Vec<Scalar>>,
}

fn unit(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

/// Extracts generators (the radical modulo its square, degreewise) and
/// relations (kernels of path evaluation modulo the ideal generated so far)
/// up to degree `top`.
pub fn present<S: Structure>(st: &S, names: &[String], prefix: &str, top: usize, truncation: usize) -> Result<(Presentation, Vec<Vec<Scalar>>)> {
    let field = st.field();
    let n = st.nverts();
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut values: Vec<Vec<Scalar>> = Vec::new();
    for d in 1..=top {
        for s in 0..n {
            for u in 0..n {
                let len = st.dim(s, u, d);
                if len == 0 {
                    continue;
                }
                let mut sq = Vec::new();
                for d1 in 1..d {
                    for t in 0..n {
                        for i in 0..st.dim(s, t, d1) {
                            for k in 0..st.dim(t, u, d - d1) {
                                let x = unit(field, st.dim(s, t, d1), i);
                                let y = unit(field, st.dim(t, u, d - d1), k);
                                sq.push(st.mul(s, t, d1, &x, u, d - d1, &y)?);
                            }
                        }
                    }
                }
                let cand: Vec<Vec<Scalar>> = (0..len).map(|i| unit(field, len, i)).collect();
                for i in complement_indices(&sq, &cand, len, field) {
                    arrows.push(Arrow { name: format!("{prefix}{}", arrows.len() + 1), src: s, dst: u, degree: d });
                    values.push(cand[i].clone());
                }
            }
        }
    }
    let quiver = Quiver { vertices: names.to_vec(), arrows };
    let mut pres = Presentation { quiver, relations: Vec::new(), field, truncation };
    for d in 2..=top {
        let alg = build_algebra_to(&pres, d)?;
        let mut new_rel = Vec::new();
        for s in 0..n {
            for u in 0..n {
                let Some(blk) = alg.block(s, u, d) else { continue };
                if blk.paths.is_empty() {
                    continue;
                }
                let len = st.dim(s, u, d);
                let cols: Vec<Vec<Scalar>> = blk.paths.iter().map(|p| eval_path(st, &pres, &values, p)).collect::<Result<_>>()?;
                let ev = Matrix::from_cols(field, len, &cols);
                let mut added: Vec<Vec<Scalar>> = Vec::new();
                let mut rank = 0;
                for k in ev.kernel() {
                    let red = blk.reduce.mul_vec(&k);
                    if red.iter().all(Scalar::is_zero) {
                        continue;
                    }
                    added.push(red);
                    let r = Matrix::from_cols(field, blk.dim(), &added).rank();
                    if r == rank {
                        added.pop();
                        continue;
                    }
                    rank = r;
                    let terms: Vec<(Scalar, Vec<usize>)> =
                        k.iter().zip(&blk.paths).filter(|(c, _)| !c.is_zero()).map(|(c, p)| (c.clone(), p.clone())).collect();
                    new_rel.push(Relation { terms });
                }
            }
        }
        pres.relations.extend(new_rel);
    }
    Ok((pres, values))
}

/// Value of a path of generators under the structure constants.
fn eval_path<S: Structure>(st: &S, pres: &Presentation, values: &[Vec<Scalar>], p: &[usize]) -> Result<Vec<Scalar>> {
    let q = &pres.quiver;
    let first = &q.arrows[p[0]];
    let (s, mut t, mut d) = (first.src, first.dst, first.degree);
    let mut acc = values[p[0]].clone();
    for &a in &p[1..] {
        let ar = &q.arrows[a];
        acc = st.mul(s, t, d, &acc, ar.dst, ar.degree, &values[a])?;
        t = ar.dst;
        d += ar.degree;
    }
    Ok(acc)
}

fn cartan_of<S: Structure>(st: &S, top: usize) -> Vec<Vec<Vec<usize>>> {
    let n = st.nverts();
    (0..=top).map(|d| (0..n).map(|m| (0..n).map(|l| st.dim(l, m, d)).collect()).collect()).collect()
}

/// Graded endomorphisms of the characteristic tilting module: degree `d`
/// from `s` to `t` is `hom(T(s), T(t)<d>)`.
pub struct RingelStructure<'a> {
    pub ts: &'a TiltingSet,
    bases: RefCellMap,
}

type RefCellMap = std::cell::RefCell<HashMap<(usize, usize, usize), Vec<ModuleMap>>>;

impl<'a> RingelStructure<'a> {
    pub fn new(ts: &'a TiltingSet) -> Self {
        RingelStructure { ts, bases: Default::default() }
    }

    pub fn basis(&self, s: usize, t: usize, d: usize) -> Vec<ModuleMap> {
        if let Some(b) = self.bases.borrow().get(&(s, t, d)) {
            return b.clone();
        }
        let b = self.ts.hom((s, 0), (t, d as i64));
        self.bases.borrow_mut().insert((s, t, d), b.clone());
        b
    }

    /// Combination of basis maps.
    pub fn element(&self, s: usize, t: usize, d: usize, x: &[Scalar]) -> Option<ModuleMap> {
        let b = self.basis(s, t, d);
        let mut acc: Option<ModuleMap> = None;
        for (m, c) in b.iter().zip(x) {
            if c.is_zero() {
                continue;
            }
            let term = m.scale(c);
            acc = Some(match acc {
                Some(a) => a.add(&term),
                None => term,
            });
        }
        acc
    }

    /// Coordinates of a map `T(s) -> T(t)<d>` in the basis, solved on the
    /// window where the map is stored.
    pub fn coords(&self, s: usize, t: usize, d: usize, f: &ModuleMap) -> Result<Vec<Scalar>> {
        let field = self.ts.zero().field();
        let b = self.basis(s, t, d);
        if b.is_empty() {
            return Ok(Vec::new());
        }
        let src = self.ts.module((s, 0));
        let dst = self.ts.module((t, d as i64));
        let (lo, hi) = common_window(&src, &dst);
        let (lo, hi) = (lo.max(f.lo), hi.min(f.hi));
        let cols: Vec<Vec<Scalar>> = b.iter().map(|m| crate::tilting::flatten(m, &src, &dst, lo, hi)).collect();
        let rhs = crate::tilting::flatten(f, &src, &dst, lo, hi);
        let m = Matrix::from_cols(field, rhs.len(), &cols);
        match m.solve(&rhs)? {
            Some((x, _)) => Ok(x),
            None => Err(Error::Refused(format!("composite of degree {d} is not in the computed hom space"))),
        }
    }
}

impl Structure for RingelStructure<'_> {
    fn nverts(&self) -> usize {
        self.ts.tilts.len()
    }

    fn field(&self) -> Field {
        self.ts.zero().field()
    }

    fn dim(&self, s: usize, t: usize, d: usize) -> usize {
        self.basis(s, t, d).len()
    }

    fn mul(&self, s: usize, t: usize, d: usize, x: &[Scalar], u: usize, e: usize, y: &[Scalar]) -> Result<Vec<Scalar>> {
        let zero = vec![self.field().zero(); self.dim(s, u, d + e)];
        let (Some(f), Some(g)) = (self.element(s, t, d, x), self.element(t, u, e, y)) else { return Ok(zero) };
        let comp = ModuleMap::compose(&shift_map(&g, d as i64), &f);
        if self.dim(s, u, d + e) == 0 {
            return if comp.is_zero() { Ok(zero) } else { Err(Error::Refused(format!("nonzero composite in empty degree {}", d + e))) };
        }
        self.coords(s, u, d + e, &comp)
    }
}

/// Degrees of `hom(T(s), T(t)<d>)` that the horizon resolves reliably.
pub fn ringel_reliable_degree(ts: &TiltingSet) -> usize {
    let low = ts.tilts.iter().filter_map(|t| t.module.bottom()).min().unwrap_or(0).min(0);
    (ts.horizon() - 3 + low).max(1) as usize
}

/// `R(A)`: quiver and relations of the graded endomorphism algebra of the
/// characteristic tilting module, with the opposite order.
pub fn ringel_dual(ctx: &Context) -> Result<PresentationOut> {
    let ts = TiltingSet::build(ctx)?;
    ringel_dual_with(ctx, &ts)
}

pub fn ringel_dual_with(ctx: &Context, ts: &TiltingSet) -> Result<PresentationOut> {
    if let Some(t) = ts.tilts.iter().find(|t| !t.finitely_constructed) {
        return Err(Error::Refused(format!("not weakly adapted: T({}) is not finitely constructible at N", ctx.vertex_name(t.vertex))));
    }
    if let Some((l, m, i, d)) = grading_defects(ts).first().copied() {
        return Err(Error::Refused(format!(
            "grading of the endomorphism algebra is not positive: hom(T({})<{i}>, T({})) has dimension {d}",
            ctx.vertex_name(l),
            ctx.vertex_name(m)
        )));
    }
    let st = RingelStructure::new(ts);
    let top = ringel_reliable_degree(ts);
    let names: Vec<String> = ctx.presentation().quiver.vertices.clone();
    let (presentation, arrow_values) = present(&st, &names, "r", top, ctx.horizon as usize)?;
    Ok(PresentationOut { presentation, arrow_values, cartan: cartan_of(&st, top), reliable_degree: top, order: ctx.order.opposite() })
}

/// Yoneda products on the diagonal Ext algebra of the simples, from stored
/// minimal resolutions. Degree `i` from `s` to `t` is
/// `ext^i(L(t), L(s)<-i>)`, with basis the generators of `P_i` of `L(t)`
/// at vertex `s` and degree `i`.
pub struct KoszulStructure<'a> {
    ctx: &'a Context,
    pub res: Vec<Resolution>,
}

impl<'a> KoszulStructure<'a> {
    pub fn new(ctx: &'a Context, depth: usize) -> Result<Self> {
        let res = (0..ctx.nverts()).map(|v| minimal_projective_resolution(ctx, &simple(&ctx.alg, v, 0), depth)).collect::<Result<Vec<_>>>()?;
        Ok(KoszulStructure { ctx, res })
    }

    /// Indices of the generators of `P_i(L(t))` at `(s, i)`.
    fn gens(&self, s: usize, t: usize, i: usize) -> Vec<usize> {
        match self.res[t].terms.get(i) {
            Some(f) => f.gens.iter().enumerate().filter(|(_, &g)| g == (s, i as i64)).map(|(q, _)| q).collect(),
            None => Vec::new(),
        }
    }

    /// Lifts the cocycle `P_k(L(u)) -> L(t)<-k>` picking generator `q0`
    /// to chain maps `P_{k+j}(L(u)) -> P_j(L(t))<-k>` for `j <= upto`;
    /// returns generator images at step `upto`.
    fn lift(&self, u: usize, k: usize, q0: usize, t: usize, upto: usize) -> Result<Vec<Vec<Scalar>>> {
        let a = &self.ctx.alg;
        let h = self.ctx.horizon;
        let field = a.field();
        let shifted = |f: &FreeModule| FreeModule::new(f.gens.iter().map(|&(v, g)| (v, g + k as i64)).collect());
        let ru = &self.res[u];
        let rt = &self.res[t];
        let src0 = &ru.terms[k];
        let tgt0 = shifted(&rt.terms[0]);
        // φ_0 on generators of P_k(L(u)).
        let mut images: Vec<Vec<Scalar>> = src0
            .gens
            .iter()
            .enumerate()
            .map(|(q, &(v, g))| {
                let len: usize = tgt0.gens.iter().map(|&(w, gw)| if g >= gw { a.dim(w, v, (g - gw) as usize) } else { 0 }).sum();
                if q == q0 {
                    tgt0.generator_vector(a, 0)
                } else {
                    vec![field.zero(); len]
                }
            })
            .collect();
        for j in 0..upto {
            let (Some(src), Some(next_src)) = (ru.terms.get(k + j), ru.terms.get(k + j + 1)) else {
                if ru.terminated {
                    return Ok(Vec::new());
                }
                return Err(Error::Refused("resolution too short for the requested product".into()));
            };
            let (Some(tj), Some(tj1)) = (rt.terms.get(j), rt.terms.get(j + 1)) else {
                return Ok(next_src.gens.iter().map(|_| Vec::new()).collect());
            };
            let (tj, tj1) = (shifted(tj), shifted(tj1));
            let tj_mod = tj.realize(a, h);
            let tj1_mod = tj1.realize(a, h);
            let phi = free_map(a, src, &tj_mod, &images, h);
            let dt = free_map(a, &tj1, &tj_mod, &rt.diffs[j], h);
            let mut next = Vec::new();
            for (x, &(v, g)) in next_src.gens.iter().enumerate() {
                let dx = &ru.diffs[k + j][x];
                let y = phi.block(g, v).map(|m| m.mul_vec(dx)).unwrap_or_default();
                let rows = tj1_mod.dim_at(v, g);
                if y.iter().all(Scalar::is_zero) || y.is_empty() {
                    next.push(vec![field.zero(); rows]);
                    continue;
                }
                let d = dt.block(g, v).ok_or_else(|| Error::Refused("differential outside the window".into()))?;
                let z = d.solve(&y)?.ok_or_else(|| Error::Refused("cocycle does not lift".into()))?.0;
                next.push(z);
            }
            images = next;
        }
        Ok(images)
    }
}

impl Structure for KoszulStructure<'_> {
    fn nverts(&self) -> usize {
        self.ctx.nverts()
    }

    fn field(&self) -> Field {
        self.ctx.field()
    }

    fn dim(&self, s: usize, t: usize, d: usize) -> usize {
        self.gens(s, t, d).len()
    }

    fn mul(&self, s: usize, t: usize, d: usize, x: &[Scalar], u: usize, e: usize, y: &[Scalar]) -> Result<Vec<Scalar>> {
        // x ∈ ext^d(L(t), L(s)), y ∈ ext^e(L(u), L(t)); the product is x ∘ y.
        let field = self.field();
        let a = &self.ctx.alg;
        let out_gens = self.gens(s, u, d + e);
        let mut out = vec![field.zero(); out_gens.len()];
        if out_gens.is_empty() {
            return Ok(out);
        }
        let xg = self.gens(s, t, d);
        for (yi, &q0) in self.gens(t, u, e).iter().enumerate() {
            if y[yi].is_zero() {
                continue;
            }
            let imgs = self.lift(u, e, q0, t, d)?;
            let tgt = FreeModule::new(self.res[t].terms[d].gens.iter().map(|&(v, g)| (v, g + e as i64)).collect());
            for (oi, &q) in out_gens.iter().enumerate() {
                let z = &imgs[q];
                if z.is_empty() {
                    continue;
                }
                let (v, g) = self.res[u].terms[d + e].gens[q];
                let off = tgt.offsets(a, v, g);
                for (xi, &p0) in xg.iter().enumerate() {
                    if x[xi].is_zero() {
                        continue;
                    }
                    let c = &z[off[p0]];
                    out[oi] = &out[oi] + &(&x[xi] * &(&y[yi] * c));
                }
            }
        }
        Ok(out)
    }
}

/// `E(A)`: quiver and relations of the Ext algebra of the simples, with the
/// opposite order. Refused unless the algebra is Koszul at the given depth.
pub fn koszul_dual(ctx: &Context, depth: usize) -> Result<PresentationOut> {
    let rep = is_koszul(ctx, depth)?;
    if !rep.koszul {
        let bad: Vec<&str> = rep.per_vertex.iter().filter(|r| !r.linear).map(|r| ctx.vertex_name(r.vertex)).collect();
        return Err(Error::Refused(format!("not Koszul: nonlinear resolution of L({})", bad.join(", "))));
    }
    let top = depth.min(ctx.horizon as usize);
    let st = KoszulStructure::new(ctx, top)?;
    let names: Vec<String> = ctx.presentation().quiver.vertices.clone();
    let (presentation, arrow_values) = present(&st, &names, "e", top, ctx.horizon as usize)?;
    Ok(PresentationOut { presentation, arrow_values, cartan: cartan_of(&st, top), reliable_degree: top, order: ctx.order.opposite() })
}

/// Outcome of a bounded isomorphism search between two presentations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// Vertex bijection and arrow bijection with the sign applied to each
    /// arrow (`true` means negated).
    Isomorphic {
        vertex_map: Vec<usize>,
        arrow_map: Vec<(usize, bool)>,
    },
    Distinguished(String),
    Undetermined(String),
}

impl Comparison {
    pub fn verdict(&self) -> Verdict {
        match self {
            Comparison::Isomorphic { .. } => Verdict::Holds,
            Comparison::Distinguished(_) => Verdict::Violated,
            Comparison::Undetermined(_) => Verdict::Undetermined,
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn cartan_matches(a: &crate::GradedAlgebra, b: &crate::GradedAlgebra, sigma: &[usize], top: usize) -> Option<usize> {
    let n = sigma.len();
    for d in 0..=top {
        for s in 0..n {
            for t in 0..n {
                if a.dim(s, t, d) != b.dim(sigma[s], sigma[t], d) {
                    return Some(d);
                }
            }
        }
    }
    None
}

/// Searches for an isomorphism of the graded algebras truncated at `top`:
/// a vertex bijection preserving the graded Cartan matrices, then arrow
/// bijections of matching shape with signs `±1`, accepted when every
/// relation maps into the ideal of the second presentation. At most
/// `budget` arrow assignments are tried.
pub fn compare_algebras(p1: &Presentation, p2: &Presentation, top: usize, budget: usize) -> Result<Comparison> {
    if p1.field != p2.field {
        return Ok(Comparison::Distinguished("different ground fields".into()));
    }
    let n = p1.quiver.vertices.len();
    if n != p2.quiver.vertices.len() {
        return Ok(Comparison::Distinguished(format!("{n} vertices against {}", p2.quiver.vertices.len())));
    }
    if n > 8 {
        return Ok(Comparison::Undetermined("too many vertices for the bijection search".into()));
    }
    let a = build_algebra_to(p1, top)?;
    let b = build_algebra_to(p2, top)?;
    let field = p1.field;
    let signs: Vec<Scalar> = if field == Field::Prime(2) { vec![field.one()] } else { vec![field.one(), -&field.one()] };
    let mut first_defect = None;
    let mut cartan_never_matched = true;
    let mut tried = 0usize;
    for sigma in permutations(n) {
        if let Some(d) = cartan_matches(&a, &b, &sigma, top) {
            first_defect.get_or_insert(d);
            continue;
        }
        cartan_never_matched = false;
        // Candidate targets for every arrow of p1.
        let q1 = &p1.quiver;
        let q2 = &p2.quiver;
        let groups: Vec<Vec<usize>> = q1
            .arrows
            .iter()
            .map(|ar| {
                q2.arrows
                    .iter()
                    .enumerate()
                    .filter(|(_, br)| br.src == sigma[ar.src] && br.dst == sigma[ar.dst] && br.degree == ar.degree)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        if q1.arrows.len() != q2.arrows.len() || groups.iter().any(Vec::is_empty) {
            continue;
        }
        let mut assign = vec![0usize; q1.arrows.len()];
        let mut sign = vec![0usize; q1.arrows.len()];
        let mut used = vec![false; q2.arrows.len()];
        let mut st = Search { groups: &groups, nsigns: signs.len(), tried: &mut tried, budget };
        let hit = st.run(&mut assign, &mut sign, &mut used, 0, &mut |assign, sign| relations_hold(p1, &b, &sigma, assign, sign, &signs, top))?;
        if hit {
            return Ok(Comparison::Isomorphic { vertex_map: sigma, arrow_map: assign.into_iter().zip(sign).map(|(x, s)| (x, s == 1)).collect() });
        }
        if tried >= budget {
            return Ok(Comparison::Undetermined(format!("no isomorphism among the first {budget} signed arrow bijections")));
        }
    }
    if tried == 0 {
        if let Some(d) = first_defect.filter(|_| cartan_never_matched) {
            return Ok(Comparison::Distinguished(format!("graded Cartan matrices differ in degree {d} under every vertex bijection")));
        }
        return Ok(Comparison::Undetermined("no vertex bijection admits a shape-preserving arrow bijection".into()));
    }
    Ok(Comparison::Undetermined("no signed arrow bijection preserves the relations".into()))
}

struct Search<'a> {
    groups: &'a [Vec<usize>],
    nsigns: usize,
    tried: &'a mut usize,
    budget: usize,
}

impl Search<'_> {
    fn run(
        &mut self,
        assign: &mut Vec<usize>,
        sign: &mut Vec<usize>,
        used: &mut Vec<bool>,
        i: usize,
        accept: &mut dyn FnMut(&[usize], &[usize]) -> Result<bool>,
    ) -> Result<bool> {
        if i == assign.len() {
            *self.tried += 1;
            return accept(assign, sign);
        }
        for &c in self.groups[i].iter() {
            if used[c] {
                continue;
            }
            used[c] = true;
            assign[i] = c;
            for sg in 0..self.nsigns {
                if *self.tried >= self.budget {
                    used[c] = false;
                    return Ok(false);
                }
                sign[i] = sg;
                if self.run(assign, sign, used, i + 1, accept)? {
                    return Ok(true);
                }
            }
            used[c] = false;
        }
        Ok(false)
    }
}

/// Whether every relation of `p1`, with arrows substituted, vanishes in `b`.
fn relations_hold(
    p1: &Presentation,
    b: &crate::GradedAlgebra,
    sigma: &[usize],
    assign: &[usize],
    sign: &[usize],
    signs: &[Scalar],
    top: usize,
) -> Result<bool> {
    let q1 = &p1.quiver;
    for r in &p1.relations {
        if r.terms.is_empty() {
            continue;
        }
        let (s, t, d) = r.shape(q1)?;
        if d > top {
            continue;
        }
        let Some(blk) = b.block(sigma[s], sigma[t], d) else { continue };
        let mut acc = vec![p1.field.zero(); blk.dim()];
        for (c, p) in &r.terms {
            let mut coef = c.clone();
            for &x in p {
                coef = &coef * &signs[sign[x]];
            }
            let image: Vec<usize> = p.iter().map(|&x| assign[x]).collect();
            for (k, v) in blk.coords(&image).iter().enumerate() {
                acc[k] = &acc[k] + &(&coef * v);
            }
        }
        if acc.iter().any(|x| !x.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `hom(Δ(λ), 𝔗)` as a graded module over the Ringel dual, set against the
/// standard module of the dual at `λ`.
#[derive(Clone, Debug)]
pub struct StandardImage {
    pub vertex: usize,
    pub image: GradedModule,
    pub expected: GradedModule,
    pub dims_match: bool,
    pub isomorphic: Verdict,
}

pub fn ringel_image_of_standard(ctx: &Context, ts: &TiltingSet, rd: &PresentationOut, lambda: usize) -> Result<StandardImage> {
    if lambda >= ctx.nverts() {
        return Err(Error::Usage(format!("unknown vertex index {lambda}")));
    }
    let top = rd.reliable_degree;
    let n = ctx.nverts();
    let field = ctx.field();
    let delta = standard_to(ctx, lambda, ts.horizon());
    let bases: Vec<Vec<Vec<ModuleMap>>> = (0..=top).map(|d| (0..n).map(|m| hom_space(&delta, &ts.module((m, d as i64)))).collect()).collect();
    let dims: Vec<Vec<usize>> = bases.iter().map(|row| row.iter().map(Vec::len).collect()).collect();
    let st = RingelStructure::new(ts);
    let q = &rd.presentation.quiver;
    let mut failure = None;
    let image = GradedModule::from_fn(field, n, shapes_of(&rd.presentation), 0, top as i64, true, false, dims, |ai, k| {
        let ar = &q.arrows[ai];
        let k = k as usize;
        let dst_basis = &bases[k + ar.degree][ar.dst];
        let src_basis = &bases[k][ar.src];
        let r = st.element(ar.src, ar.dst, ar.degree, &rd.arrow_values[ai]);
        let dst = ts.module((ar.dst, (k + ar.degree) as i64));
        let (lo, hi) = common_window(&delta, &dst);
        let cols: Vec<Vec<Scalar>> = dst_basis.iter().map(|m| crate::tilting::flatten(m, &delta, &dst, lo, hi)).collect();
        let basis = Matrix::from_cols(field, cols.first().map_or(0, Vec::len), &cols);
        let out: Vec<Vec<Scalar>> = src_basis
            .iter()
            .map(|f| {
                let Some(r) = &r else { return vec![field.zero(); dst_basis.len()] };
                let g = ModuleMap::compose(&shift_map(r, k as i64), f);
                let rhs = crate::tilting::flatten(&g, &delta, &dst, lo, hi);
                match basis.solve(&rhs) {
                    Ok(Some((x, _))) => x,
                    _ => {
                        failure.get_or_insert(k);
                        vec![field.zero(); dst_basis.len()]
                    }
                }
            })
            .collect();
        Matrix::from_cols(field, dst_basis.len(), &out)
    });
    if let Some(k) = failure {
        return Err(Error::Refused(format!("composite out of the computed hom space in degree {k}")));
    }
    let rctx = Context::new(&rd.presentation, rd.order.clone(), ctx.depth)?;
    let expected = standard_to(&rctx, lambda, top as i64);
    let dims_match = (0..=top as i64).all(|j| (0..n).all(|v| image.dim_at(v, j) == expected.dim_at(v, j)));
    let isomorphic = if !dims_match {
        Verdict::Violated
    } else if generic_iso(&image, &expected, top as i64) {
        Verdict::Holds
    } else {
        Verdict::Undetermined
    };
    Ok(StandardImage { vertex: lambda, image, expected, dims_match, isomorphic })
}

/// Whether a fixed generic combination of homomorphisms is bijective in
/// every degree up to `top`.
fn generic_iso(a: &GradedModule, b: &GradedModule, top: i64) -> bool {
    let field = a.field();
    let basis = hom_space(a, b);
    let mut acc: Option<ModuleMap> = None;
    for (i, m) in basis.iter().enumerate() {
        let t = m.scale(&field.int(i as i64 * 7 + 1));
        acc = Some(match acc {
            Some(x) => x.add(&t),
            None => t,
        });
    }
    let Some(f) = acc else { return (0..=top).all(|j| a.total_dim(j) == 0) };
    (0..=top).all(|j| {
        (0..a.nverts()).all(|v| {
            let d = a.dim_at(v, j);
            if d == 0 {
                return true;
            }
            f.block(j, v).is_some_and(|m| m.rows() == d && m.cols() == d && m.rank() == d)
        })
    })
}

/// The square `R(E(A))` against `E(R(A))`.
#[derive(Clone, Debug)]
pub struct CommuteReport {
    pub koszul: PresentationOut,
    pub ringel: PresentationOut,
    pub ringel_of_koszul: PresentationOut,
    pub koszul_of_ringel: PresentationOut,
    pub classification: Classification,
    pub comparison: Comparison,
    pub degree: usize,
}

pub fn check_commutativity(ctx: &Context, depth: usize, budget: usize) -> Result<CommuteReport> {
    let classification = classify(ctx)?;
    if classification.class != AlgebraClass::Balanced {
        return Err(Error::Refused(format!("algebra is {}, not balanced", classification.class.as_str())));
    }
    let koszul = koszul_dual(ctx, depth)?;
    let ringel = ringel_dual(ctx)?;
    let kctx = Context::new(&koszul.presentation, koszul.order.clone(), depth)?;
    let rctx = Context::new(&ringel.presentation, ringel.order.clone(), depth)?;
    let ringel_of_koszul = ringel_dual(&kctx)?;
    let koszul_of_ringel = koszul_dual(&rctx, depth)?;
    let degree = ringel_of_koszul.reliable_degree.min(koszul_of_ringel.reliable_degree);
    let comparison = compare_algebras(&ringel_of_koszul.presentation, &koszul_of_ringel.presentation, degree, budget)?;
    Ok(CommuteReport { koszul, ringel, ringel_of_koszul, koszul_of_ringel, classification, comparison, degree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::{arrow, arrow_loop, commuting_loops, kx, pres};

    fn ctx(p: Presentation) -> Context {
        let n = p.quiver.vertices.len();
        Context::new(&p, StratOrder::chain(n), 6).unwrap()
    }

    /// Ext algebra of the simples over commuting_loops: loops squaring to zero and an
    /// arrow 2 -> 1 commuting with them.
    fn commuting_loops_ext() -> Presentation {
        pres(
            &["1", "2"],
            vec![arrow("l1", 0, 0), arrow("l2", 1, 1), arrow("a", 1, 0)],
            vec![vec![(1, vec![0, 0])], vec![(1, vec![1, 1])], vec![(1, vec![2, 0]), (-1, vec![1, 2])]],
            8,
        )
    }

    #[test]
    fn ringel_dual_of_commuting_loops_is_opposite() {
        let c = ctx(commuting_loops(8));
        let r = ringel_dual(&c).unwrap();
        assert_eq!(r.presentation.quiver.arrows.len(), 3);
        assert_eq!(r.presentation.relations.len(), 1);
        let op = commuting_loops(8).opposite();
        let a = build_algebra_to(&op, r.reliable_degree).unwrap();
        for d in 0..=r.reliable_degree {
            assert_eq!(
                r.cartan[d],
                a.cartan(d).iter().enumerate().map(|(m, _)| (0..2).map(|l| a.dim(l, m, d)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "d={d}"
            );
        }
        let cmp = compare_algebras(&r.presentation, &op, r.reliable_degree, 1000).unwrap();
        assert!(matches!(cmp, Comparison::Isomorphic { .. }), "{cmp:?}");
        assert_eq!(cmp.verdict(), Verdict::Holds);
    }

    #[test]
    fn ringel_refuses_non_weakly_adapted() {
        assert!(matches!(ringel_dual(&ctx(arrow_loop(6))), Err(Error::Refused(_))));
    }

    #[test]
    fn koszul_dual_of_polynomial_ring_is_exterior() {
        let c = ctx(kx(6));
        let e = koszul_dual(&c, 6).unwrap();
        assert_eq!(e.cartan.iter().map(|m| m[0][0]).collect::<Vec<_>>(), vec![1, 1, 0, 0, 0, 0, 0]);
        let ext = pres(&["1"], vec![arrow("xi", 0, 0)], vec![vec![(1, vec![0, 0])]], 6);
        let cmp = compare_algebras(&e.presentation, &ext, 6, 100).unwrap();
        assert_eq!(cmp.verdict(), Verdict::Holds);
    }

    #[test]
    fn koszul_dual_of_commuting_loops() {
        let c = ctx(commuting_loops(8));
        let e = koszul_dual(&c, 6).unwrap();
        let q = &e.presentation.quiver;
        assert_eq!(q.arrows.len(), 3);
        assert!(q.arrows.iter().any(|a| (a.src, a.dst) == (1, 0)));
        let cmp = compare_algebras(&e.presentation, &commuting_loops_ext(), 6, 1000).unwrap();
        assert_eq!(cmp.verdict(), Verdict::Holds, "{:?}", e.presentation.relations);
        assert_eq!(e.order, c.order.opposite());
    }

    #[test]
    fn comparison_distinguishes_by_cartan() {
        let cmp = compare_algebras(&commuting_loops(6), &arrow_loop(6), 4, 100).unwrap();
        assert_eq!(cmp.verdict(), Verdict::Violated);
        let one = pres(&["1"], vec![], vec![], 4);
        assert_eq!(compare_algebras(&one, &kx(4), 4, 100).unwrap().verdict(), Verdict::Violated);
    }

    #[test]
    fn comparison_finds_identity() {
        let cmp = compare_algebras(&commuting_loops(6), &commuting_loops(6), 5, 100).unwrap();
        assert!(matches!(cmp, Comparison::Isomorphic { .. }));
    }

    #[test]
    fn standard_images_of_commuting_loops() {
        let c = ctx(commuting_loops(8));
        let ts = TiltingSet::build(&c).unwrap();
        let r = ringel_dual_with(&c, &ts).unwrap();
        for l in 0..2 {
            let im = ringel_image_of_standard(&c, &ts, &r, l).unwrap();
            assert!(im.dims_match, "λ={l}");
            assert_eq!(im.isomorphic, Verdict::Holds, "λ={l}");
        }
    }

    #[test]
    fn commuting_loops_square_commutes() {
        let c = ctx(commuting_loops(8));
        let rep = check_commutativity(&c, 6, 10_000).unwrap();
        assert_eq!(rep.comparison.verdict(), Verdict::Holds, "{:?}", rep.comparison);
    }
}
