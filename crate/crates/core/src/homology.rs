//! Minimal projective resolutions, graded Ext, and bookkeeping for complexes
//! of shifted indecomposables.
//!
//! Complexes are indexed cohomologically: a projective resolution occupies
//! positions `0, -1, -2, ...`. A summand `X<j>` has centroid `-j`; a complex
//! is linear when every summand at position `i` is of the form `X<i>`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::algebra::GradedAlgebra;
use crate::context::Context;
use crate::error::{Error, Result};
use crate::linalg::{quotient_basis, Matrix, Scalar};
use crate::module::{GradedModule, ModuleMap};
use crate::projective::{free_map, simple, FreeModule};

/// Kinds of named indecomposable modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Projective,
    Injective,
    Simple,
    Tilting,
    Standard,
    ProperStandard,
    Costandard,
    ProperCostandard,
}

impl Kind {
    pub fn symbol(self) -> &'static str {
        match self {
            Kind::Projective => "P",
            Kind::Injective => "I",
            Kind::Simple => "L",
            Kind::Tilting => "T",
            Kind::Standard => "Delta",
            Kind::ProperStandard => "pDelta",
            Kind::Costandard => "Nabla",
            Kind::ProperCostandard => "pNabla",
        }
    }
}

/// `X(vertex)<shift>` for a named indecomposable `X`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Summand {
    pub kind: Kind,
    pub vertex: usize,
    pub shift: i64,
}

impl Summand {
    pub fn centroid(&self) -> i64 {
        -self.shift
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})<{}>", self.kind.symbol(), self.vertex, self.shift)
    }
}

/// A bounded complex whose terms are listed as named summands. Realized
/// modules and differentials are optional.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Complex {
    pub terms: BTreeMap<i64, Vec<Summand>>,
    /// Realized terms, keyed by position.
    pub modules: BTreeMap<i64, GradedModule>,
    /// `diffs[i]` maps the term at position `i` to position `i + 1`.
    pub diffs: BTreeMap<i64, ModuleMap>,
}

impl Complex {
    pub fn from_terms(terms: BTreeMap<i64, Vec<Summand>>) -> Complex {
        Complex { terms, ..Default::default() }
    }

    /// Nonzero positions in increasing order.
    pub fn positions(&self) -> Vec<i64> {
        self.terms.iter().filter(|(_, s)| !s.is_empty()).map(|(&i, _)| i).collect()
    }

    /// Shifts every summand by `<k>`.
    pub fn grading_shift(&self, k: i64) -> Complex {
        Complex::from_terms(self.terms.iter().map(|(&i, s)| (i, s.iter().map(|x| Summand { shift: x.shift + k, ..x.clone() }).collect())).collect())
    }

    /// `d ∘ d = 0` on every realized pair of consecutive differentials.
    pub fn d_squared_zero(&self) -> bool {
        self.diffs.iter().all(|(&i, d)| match self.diffs.get(&(i + 1)) {
            Some(e) => ModuleMap::compose(e, d).is_zero(),
            None => true,
        })
    }

    /// Compact rendering such as `-1: T(1)<-1> | 0: T(1)<0>`.
    pub fn describe(&self, names: &[String]) -> String {
        self.positions()
            .iter()
            .map(|i| {
                let s: Vec<String> = self.terms[i].iter().map(|x| format!("{}({})<{}>", x.kind.symbol(), names[x.vertex], x.shift)).collect();
                format!("{i}: {}", s.join(" + "))
            })
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

/// True iff every summand at position `i` has centroid `-i`.
pub fn is_linear(c: &Complex, kind: Kind) -> Result<bool> {
    for (&i, summands) in &c.terms {
        for s in summands {
            if s.kind != kind {
                return Err(Error::Usage(format!("summand {s} is not of kind {}", kind.symbol())));
            }
            if s.centroid() != -i {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff at every position each centroid of `x` is strictly below each
/// centroid of `y`.
pub fn dominates(x: &Complex, y: &Complex) -> bool {
    for (i, xs) in &x.terms {
        let Some(ys) = y.terms.get(i) else { continue };
        for a in xs {
            for b in ys {
                if a.centroid() >= b.centroid() {
                    return false;
                }
            }
        }
    }
    true
}

/// A minimal graded projective resolution `... -> P_1 -> P_0 -> M`.
#[derive(Clone, Debug)]
pub struct Resolution {
    /// `terms[i]` is `P_i`, placed at position `-i`.
    pub terms: Vec<FreeModule>,
    /// Images of the generators of `P_0` in `M`.
    pub augmentation: Vec<Vec<Scalar>>,
    /// `diffs[i][q]`: image of generator `q` of `P_{i+1}` in `P_i`, as a
    /// vector of the component of `P_i` at that generator's vertex and degree.
    pub diffs: Vec<Vec<Vec<Scalar>>>,
    /// Degrees up to which every term is exact.
    pub horizon: i64,
    /// The last computed kernel vanished inside the window.
    pub terminated: bool,
}

impl Resolution {
    pub fn as_complex(&self) -> Complex {
        Complex::from_terms(
            self.terms
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    let mut s: Vec<Summand> = f.gens.iter().map(|&(v, g)| Summand { kind: Kind::Projective, vertex: v, shift: -g }).collect();
                    s.sort();
                    (-(i as i64), s)
                })
                .collect(),
        )
    }

    /// Multiplicity of `P(v)<-g>` in `P_i`.
    pub fn multiplicity(&self, i: usize, v: usize, g: i64) -> usize {
        self.terms.get(i).map_or(0, |f| f.gens.iter().filter(|&&x| x == (v, g)).count())
    }

    /// The differential `P_{i+1} -> P_i` as a module map on realized terms.
    pub fn differential(&self, a: &GradedAlgebra, i: usize) -> Option<ModuleMap> {
        let src = self.terms.get(i + 1)?;
        let dst = self.terms[i].realize(a, self.horizon);
        Some(free_map(a, src, &dst, &self.diffs[i], self.horizon))
    }
}

/// Generators of the top of `m`: vectors `x ∈ e_v M_j` whose classes form a
/// basis of `M / rad M`, listed by degree then vertex.
pub fn top_generators(m: &GradedModule) -> Vec<(usize, i64, Vec<Scalar>)> {
    let rad = m.radical();
    let mut out = Vec::new();
    for j in m.lo()..=m.hi() {
        for v in 0..m.nverts() {
            let d = m.dim_at(v, j);
            if d == 0 {
                continue;
            }
            let (_, section) = quotient_basis(&rad.basis[(j - m.lo()) as usize][v], d);
            for c in section.columns() {
                out.push((v, j, c));
            }
        }
    }
    out
}

/// Minimal projective resolution of `m` through `P_bound`.
///
/// `m` must have an exact lower end. Terms are exact in degrees up to the
/// context horizon.
pub fn minimal_projective_resolution(ctx: &Context, m: &GradedModule, bound: usize) -> Result<Resolution> {
    resolve_over(&ctx.alg, m, bound, ctx.horizon)
}

/// Same as [`minimal_projective_resolution`] with an explicit algebra and horizon.
pub fn resolve_over(a: &GradedAlgebra, m: &GradedModule, bound: usize, horizon: i64) -> Result<Resolution> {
    if !m.lo_exact() {
        return Err(Error::Usage("resolutions need a module bounded below".into()));
    }
    let m = m.truncate_above(horizon);
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    let mut augmentation = Vec::new();
    let mut cur = m.clone();
    // Embedding of the current module into the previous free term.
    let mut embed: Option<ModuleMap> = None;
    let mut terminated = false;
    for i in 0..=bound {
        let gens = top_generators(&cur);
        let free = FreeModule::new(gens.iter().map(|(v, j, _)| (*v, *j)).collect());
        let images: Vec<Vec<Scalar>> = gens.iter().map(|(_, _, x)| x.clone()).collect();
        match &embed {
            None => augmentation = images.clone(),
            Some(e) => diffs.push(gens.iter().zip(&images).map(|((v, j, _), x)| e.block(*j, *v).expect("inside window").mul_vec(x)).collect()),
        }
        terms.push(free.clone());
        if free.is_empty() {
            terminated = true;
            break;
        }
        if i == bound {
            break;
        }
        let pm = free.realize(a, horizon);
        let phi = free_map(a, &free, &cur, &images, horizon);
        let ker = phi.kernel(&pm);
        let (k, inc) = pm.submodule(&ker);
        if k.is_zero() {
            terminated = true;
            break;
        }
        cur = k;
        embed = Some(inc);
    }
    if terminated {
        while terms.last().is_some_and(FreeModule::is_empty) && terms.len() > 1 {
            terms.pop();
            if diffs.len() >= terms.len() {
                diffs.pop();
            }
        }
    }
    Ok(Resolution { terms, augmentation, diffs, horizon, terminated })
}

/// Cohomology of `hom(P_•, X)` for a resolution: returns, for each
/// `0 <= i <= bound`, the dimension of `ext^i(M, X)` and whether the cell is
/// exact.
pub fn ext_dims(a: &GradedAlgebra, res: &Resolution, x: &GradedModule, bound: usize) -> Vec<(usize, bool)> {
    let field = a.field();
    let mut path_cache: HashMap<(Vec<usize>, i64), Option<Matrix>> = HashMap::new();
    let mut path_matrix = |p: &Vec<usize>, g: i64, v: usize| -> Option<Matrix> {
        path_cache
            .entry((p.clone(), g))
            .or_insert_with(|| {
                let d = x.dim(v, g)?;
                let cols: Option<Vec<Vec<Scalar>>> = (0..d)
                    .map(|c| {
                        let mut e = vec![field.zero(); d];
                        e[c] = field.one();
                        x.apply_path(p, g, &e)
                    })
                    .collect();
                let cols = cols?;
                let (s, t, deg) = if p.is_empty() { (v, v, 0) } else { a.quiver().path_shape(p).expect("path") };
                let _ = s;
                let rows = x.dim(t, g + deg as i64)?;
                Some(Matrix::from_cols(field, rows, &cols))
            })
            .clone()
    };
    let known = |v: usize, g: i64| x.dim(v, g).is_some();
    let term_exact = |i: usize| -> bool {
        match res.terms.get(i) {
            None => res.terminated,
            Some(f) => f.gens.iter().all(|&(v, g)| known(v, g)),
        }
    };
    let resolution_exact = x.is_finite() && x.top_degree().is_none_or(|t| t <= res.horizon);
    // hom(P_i, X) = ⊕ e_v X_g over generators; offsets per generator.
    let cochain_dim = |i: usize| -> Vec<usize> { res.terms.get(i).map_or(Vec::new(), |f| f.gens.iter().map(|&(v, g)| x.dim(v, g).unwrap_or(0)).collect()) };
    let mut dmats: Vec<Matrix> = Vec::new();
    for i in 0..=bound {
        let src_dims = cochain_dim(i);
        let dst_dims = cochain_dim(i + 1);
        let rows: usize = dst_dims.iter().sum();
        let cols: usize = src_dims.iter().sum();
        let mut m = Matrix::zeros(field, rows, cols);
        if let (Some(pi), Some(images)) = (res.terms.get(i), res.diffs.get(i)) {
            let mut r0 = 0;
            for (q, &(vq, gq)) in res.terms[i + 1].gens.iter().enumerate() {
                let offs = pi.offsets(a, vq, gq);
                let mut c0 = 0;
                for (p, &(vp, gp)) in pi.gens.iter().enumerate() {
                    if gq >= gp && src_dims[p] > 0 && dst_dims[q] > 0 {
                        let blk = a.block(vp, vq, (gq - gp) as usize).expect("within depth");
                        for b in 0..blk.dim() {
                            let coef = &images[q][offs[p] + b];
                            if coef.is_zero() {
                                continue;
                            }
                            if let Some(pm) = path_matrix(blk.basis_path(b), gp, vp) {
                                let scaled = pm.scale(coef);
                                for rr in 0..scaled.rows() {
                                    for cc in 0..scaled.cols() {
                                        let y = m.get(r0 + rr, c0 + cc) + scaled.get(rr, cc);
                                        m.set(r0 + rr, c0 + cc, y);
                                    }
                                }
                            }
                        }
                    }
                    c0 += src_dims[p];
                }
                r0 += dst_dims[q];
            }
        }
        dmats.push(m);
    }
    (0..=bound)
        .map(|i| {
            let cdim: usize = cochain_dim(i).iter().sum();
            let rank_out = dmats[i].rank();
            let rank_in = if i == 0 { 0 } else { dmats[i - 1].rank() };
            let dim = cdim - rank_out - rank_in;
            let computed = i + 1 < res.terms.len() || res.terminated;
            let exact = computed && resolution_exact && term_exact(i) && term_exact(i + 1) && (i == 0 || term_exact(i - 1));
            (dim, exact)
        })
        .collect()
}

/// `dim ext^i(M, N<j>)` for `0 <= i <= L` and `j` in a range, with
/// reliability flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtTable {
    pub shifts: Vec<i64>,
    /// `cells[i][k]` is the cell for `ext^i` and `shifts[k]`.
    pub cells: Vec<Vec<ExtCell>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtCell {
    pub dim: usize,
    pub exact: bool,
}

impl ExtTable {
    pub fn get(&self, i: usize, j: i64) -> Option<ExtCell> {
        let k = self.shifts.iter().position(|&s| s == j)?;
        self.cells.get(i)?.get(k).copied()
    }
}

/// Graded Ext table `ext^i(M, N<j>)` for `i <= bound` and the given shifts.
pub fn ext(ctx: &Context, m: &GradedModule, n: &GradedModule, bound: usize, shifts: &[i64]) -> Result<ExtTable> {
    let res = minimal_projective_resolution(ctx, m, bound + 1)?;
    Ok(ext_with(ctx, &res, n, bound, shifts))
}

/// Ext table from a precomputed resolution.
pub fn ext_with(ctx: &Context, res: &Resolution, n: &GradedModule, bound: usize, shifts: &[i64]) -> ExtTable {
    let mut cells = vec![Vec::new(); bound + 1];
    for &j in shifts {
        let x = n.shift(j);
        for (i, (dim, exact)) in ext_dims(&ctx.alg, res, &x, bound).into_iter().enumerate() {
            cells[i].push(ExtCell { dim, exact });
        }
    }
    ExtTable { shifts: shifts.to_vec(), cells }
}

/// Linearity report for the resolution of one simple module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearityReport {
    pub vertex: usize,
    pub linear: bool,
    /// Positions (as `i` in `P_i`) that were fully computed inside the horizon.
    pub exact_through: usize,
    pub resolution: Complex,
}

/// Verdict of the Koszulity test at a homological depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulReport {
    pub koszul: bool,
    /// Every checked term lies strictly inside the horizon.
    pub exact: bool,
    pub per_vertex: Vec<LinearityReport>,
}

/// Checks that every simple module has a linear minimal resolution through
/// position `depth`.
pub fn is_koszul(ctx: &Context, depth: usize) -> Result<KoszulReport> {
    let mut per_vertex = Vec::new();
    let mut all_linear = true;
    let mut exact = true;
    for v in 0..ctx.nverts() {
        let l = simple(&ctx.alg, v, 0);
        let res = minimal_projective_resolution(ctx, &l, depth)?;
        let complex = res.as_complex();
        let linear = is_linear(&complex, Kind::Projective)?;
        let reach = if res.terminated { depth } else { depth.min(res.terms.len().saturating_sub(1)) };
        let exact_through = reach.min((ctx.horizon - 1).max(0) as usize);
        if exact_through < depth {
            exact = false;
        }
        all_linear &= linear;
        per_vertex.push(LinearityReport { vertex: v, linear, exact_through, resolution: complex });
    }
    Ok(KoszulReport { koszul: all_linear, exact, per_vertex })
}
