//! Stratification orders, standard and proper costandard modules, and
//! filtrations by them.

use crate::error::{Error, Result};

/// A preorder on the vertices, stored as equivalence classes with a strict
/// order between classes.
///
/// Classes are listed in a linear extension of the order (earlier classes
/// are never bigger than later ones).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratOrder {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    /// `less[a][b]`: class `a` is strictly below class `b`.
    less: Vec<Vec<bool>>,
}

impl StratOrder {
    /// A total preorder from classes listed in increasing order.
    pub fn new(classes: Vec<Vec<usize>>, nverts: usize) -> Result<StratOrder> {
        let k = classes.len();
        let chains = vec![(0..k).collect::<Vec<_>>()];
        StratOrder::from_chains(classes, &chains, nverts)
    }

    /// Each vertex is its own class, ordered by index.
    pub fn chain(nverts: usize) -> StratOrder {
        StratOrder::new((0..nverts).map(|v| vec![v]).collect(), nverts).expect("valid chain")
    }

    /// The full relation: one class containing every vertex.
    pub fn full(nverts: usize) -> StratOrder {
        StratOrder::new(vec![(0..nverts).collect()], nverts).expect("valid full relation")
    }

    /// A preorder generated by chains of classes (each chain increasing).
    /// Classes not mentioned in any chain are incomparable to the rest.
    pub fn from_chains(classes: Vec<Vec<usize>>, chains: &[Vec<usize>], nverts: usize) -> Result<StratOrder> {
        let mut class_of = vec![usize::MAX; nverts];
        for (c, members) in classes.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::Usage("empty class in order".into()));
            }
            for &v in members {
                if v >= nverts {
                    return Err(Error::Usage(format!("vertex {v} out of range in order")));
                }
                if class_of[v] != usize::MAX {
                    return Err(Error::Usage("order classes overlap".into()));
                }
                class_of[v] = c;
            }
        }
        if class_of.contains(&usize::MAX) {
            return Err(Error::Usage("order does not cover every vertex".into()));
        }
        let k = classes.len();
        let mut less = vec![vec![false; k]; k];
        for ch in chains {
            for w in ch.windows(2) {
                less[w[0]][w[1]] = true;
            }
        }
        for m in 0..k {
            for a in 0..k {
                for b in 0..k {
                    if less[a][m] && less[m][b] {
                        less[a][b] = true;
                    }
                }
            }
        }
        if (0..k).any(|a| less[a][a]) {
            return Err(Error::Usage("order contains a cycle".into()));
        }
        // Reorder classes along a linear extension, ties by input order.
        let mut placed = vec![false; k];
        let mut seq = Vec::new();
        while seq.len() < k {
            let next = (0..k).find(|&c| !placed[c] && (0..k).all(|b| placed[b] || !less[b][c])).expect("acyclic");
            placed[next] = true;
            seq.push(next);
        }
        let new_classes: Vec<Vec<usize>> = seq
            .iter()
            .map(|&c| {
                let mut m = classes[c].clone();
                m.sort_unstable();
                m
            })
            .collect();
        let new_less: Vec<Vec<bool>> = seq.iter().map(|&a| seq.iter().map(|&b| less[a][b]).collect()).collect();
        let mut new_class_of = vec![0; nverts];
        for (c, members) in new_classes.iter().enumerate() {
            for &v in members {
                new_class_of[v] = c;
            }
        }
        Ok(StratOrder { classes: new_classes, class_of: new_class_of, less: new_less })
    }

    pub fn nverts(&self) -> usize {
        self.class_of.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn class_members(&self, c: usize) -> &[usize] {
        &self.classes[c]
    }

    /// Strict order between classes.
    pub fn class_lt(&self, a: usize, b: usize) -> bool {
        self.less[a][b]
    }

    /// `v ≺ w`.
    pub fn lt(&self, v: usize, w: usize) -> bool {
        self.less[self.class_of[v]][self.class_of[w]]
    }

    /// `v ∼ w`.
    pub fn equiv(&self, v: usize, w: usize) -> bool {
        self.class_of[v] == self.class_of[w]
    }

    /// `v ⪯ w`.
    pub fn le(&self, v: usize, w: usize) -> bool {
        self.equiv(v, w) || self.lt(v, w)
    }

    pub fn is_maximal_class(&self, c: usize) -> bool {
        c < self.classes.len() && (0..self.classes.len()).all(|b| !self.less[c][b])
    }

    /// The reversed preorder.
    pub fn opposite(&self) -> StratOrder {
        let k = self.classes.len();
        let chains: Vec<Vec<usize>> = (0..k).flat_map(|a| (0..k).filter(move |&b| self.less[a][b]).map(move |b| vec![b, a])).collect();
        StratOrder::from_chains(self.classes.clone(), &chains, self.nverts()).expect("reversal of a preorder")
    }

    /// Restriction to a subset of vertices, renumbered by position in `keep`.
    pub fn restrict(&self, keep: &[usize]) -> StratOrder {
        let mut classes = Vec::new();
        let mut old_ids = Vec::new();
        for (c, members) in self.classes.iter().enumerate() {
            let m: Vec<usize> = members.iter().filter_map(|v| keep.iter().position(|k| k == v)).collect();
            if !m.is_empty() {
                classes.push(m);
                old_ids.push(c);
            }
        }
        let chains: Vec<Vec<usize>> = (0..old_ids.len())
            .flat_map(|a| (0..old_ids.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| self.less[old_ids[a]][old_ids[b]])
            .map(|(a, b)| vec![a, b])
            .collect();
        StratOrder::from_chains(classes, &chains, keep.len()).expect("restriction of a preorder")
    }

    /// Pairs of classes `(a, b)` with `a ≺ b`.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let k = self.classes.len();
        (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).filter(|&(a, b)| self.less[a][b]).collect()
    }
}

#[cfg(test)]
mod order_tests {
    use super::*;

    #[test]
    fn chain_relations() {
        let o = StratOrder::chain(3);
        assert!(o.lt(0, 2));
        assert!(!o.lt(2, 0));
        assert!(o.is_maximal_class(2));
        let op = o.opposite();
        assert!(op.lt(2, 0));
        assert!(op.is_maximal_class(op.class_of(0)));
    }

    #[test]
    fn rejects_non_partitions() {
        assert!(StratOrder::new(vec![vec![0], vec![0, 1]], 2).is_err());
        assert!(StratOrder::new(vec![vec![0]], 2).is_err());
    }

    #[test]
    fn full_relation_has_one_class() {
        let o = StratOrder::full(3);
        assert_eq!(o.num_classes(), 1);
        assert!(o.equiv(0, 2) && o.le(2, 0) && !o.lt(0, 2));
    }
}

use std::collections::BTreeMap;

use crate::context::Context;
use crate::homology::{ext_with, minimal_projective_resolution, Kind};
use crate::module::{hom_dim, GradedModule};
use crate::projective::{injective, projective};

/// Three-valued answer for statements that a finite window can only
/// partially certify.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Holds,
    Violated,
    Undetermined,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds at N",
            Verdict::Violated => "violated within N",
            Verdict::Undetermined => "undetermined at N",
        }
    }

    /// Conjunction: violated beats undetermined beats holds.
    pub fn and(self, o: Verdict) -> Verdict {
        match (self, o) {
            (Verdict::Violated, _) | (_, Verdict::Violated) => Verdict::Violated,
            (Verdict::Undetermined, _) | (_, Verdict::Undetermined) => Verdict::Undetermined,
            _ => Verdict::Holds,
        }
    }
}

/// The four families of (proper) (co)standard modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StratKind {
    Standard,
    ProperStandard,
    Costandard,
    ProperCostandard,
}

impl StratKind {
    pub fn kind(self) -> Kind {
        match self {
            StratKind::Standard => Kind::Standard,
            StratKind::ProperStandard => Kind::ProperStandard,
            StratKind::Costandard => Kind::Costandard,
            StratKind::ProperCostandard => Kind::ProperCostandard,
        }
    }
}

/// `Δ(λ) = P(λ) / trace{P(μ)<i> : λ ≺ μ}`, stored up to degree `hi`.
pub fn standard_to(ctx: &Context, lambda: usize, hi: i64) -> GradedModule {
    let p = projective(&ctx.alg, lambda, 0, hi);
    let tr = p.trace(|mu, _| ctx.order.lt(lambda, mu));
    p.quotient(&tr).0.close_if_vanishing(0)
}

/// `Δ̄(λ) = P(λ) / trace{P(μ)<i> : λ ⪯ μ, i < 0}`, stored up to degree `hi`.
pub fn proper_standard_to(ctx: &Context, lambda: usize, hi: i64) -> GradedModule {
    let p = projective(&ctx.alg, lambda, 0, hi);
    let tr = p.trace(|mu, g| ctx.order.le(lambda, mu) && g > 0);
    p.quotient(&tr).0.close_if_vanishing(0)
}

/// The (proper) (co)standard module of the given kind. Standard modules
/// live in degrees `[0, N]`, costandard ones in `[-N, 0]`.
pub fn strat_module(ctx: &Context, kind: StratKind, lambda: usize) -> GradedModule {
    let h = ctx.horizon;
    match kind {
        StratKind::Standard => standard_to(ctx, lambda, h),
        StratKind::ProperStandard => proper_standard_to(ctx, lambda, h),
        StratKind::Costandard => standard_to(&ctx.opposite(), lambda, h).dual(),
        StratKind::ProperCostandard => proper_standard_to(&ctx.opposite(), lambda, h).dual(),
    }
}

/// One subquotient `X(λ)<shift>` of a filtration; `degree = -shift` is the
/// degree of its top (or socle, for costandard layers).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Layer {
    pub kind: Kind,
    pub vertex: usize,
    pub shift: i64,
    pub degree: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiltrationStatus {
    /// Every layer was found strictly inside the window.
    Complete,
    /// Layers reach the truncation degree.
    TruncatedAtN,
    /// Peeling failed; see the diagnosis.
    Failed,
}

impl FiltrationStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FiltrationStatus::Complete => "complete",
            FiltrationStatus::TruncatedAtN => "truncated at N",
            FiltrationStatus::Failed => "failed",
        }
    }
}

/// A nonzero `ext^1(M, ∇̄(λ)<j>)` witnessing the absence of a Δ-filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtWitness {
    pub vertex: usize,
    pub shift: i64,
    pub dim: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationReport {
    /// Layers strictly inside the window: smallest class first (top of the
    /// module), increasing degree within a class.
    pub layers: Vec<Layer>,
    /// Layers whose top sits at the truncation degree or beyond.
    pub boundary_layers: Vec<Layer>,
    pub status: FiltrationStatus,
    /// Degree of the first dimension mismatch, when peeling failed.
    pub failed_at: Option<i64>,
    pub diagnosis: Vec<ExtWitness>,
}

impl FiltrationReport {
    /// `[M : X(λ)<j>]` from the explicit layers, keyed by `(λ, shift)`.
    pub fn multiplicities(&self) -> BTreeMap<(usize, i64), usize> {
        let mut m = BTreeMap::new();
        for l in &self.layers {
            *m.entry((l.vertex, l.shift)).or_insert(0) += 1;
        }
        m
    }

    pub fn is_certified(&self) -> bool {
        self.status != FiltrationStatus::Failed
    }
}

/// Peels a Δ-filtration off `m`: for classes from maximal to minimal, the
/// trace of the class is checked to be a sum of shifted standard modules and
/// then factored out.
pub fn delta_filtration(ctx: &Context, m: &GradedModule) -> FiltrationReport {
    let h = ctx.horizon;
    let lo = m.lo().min(0);
    let deep = h - lo.min(ctx.floor());
    let deltas: Vec<GradedModule> = (0..ctx.nverts()).map(|v| standard_to(ctx, v, deep)).collect();
    let mut q = m.truncate_above(h);
    let mut peeled: Vec<Vec<Layer>> = Vec::new();
    let mut failed_at: Option<i64> = None;
    for c in (0..ctx.order.num_classes()).rev() {
        let tr = q.trace(|v, _| ctx.order.class_of(v) == c);
        let (u, _) = q.submodule(&tr);
        let tops = u.top_dims();
        let mut layers = Vec::new();
        for &(v, g, mult) in &tops {
            for _ in 0..mult {
                layers.push(Layer { kind: Kind::Standard, vertex: v, shift: -g, degree: g });
            }
        }
        for k in u.lo()..=h.max(u.hi()) {
            if !u.known(k) {
                continue;
            }
            for t in 0..ctx.nverts() {
                let expect: usize = tops.iter().map(|&(v, g, mult)| if k >= g { mult * deltas[v].dim_at(t, k - g) } else { 0 }).sum();
                if expect != u.dim_at(t, k) && failed_at.is_none_or(|f| k < f) {
                    failed_at = Some(k);
                }
            }
        }
        layers.sort_by_key(|l| (l.degree, l.vertex));
        peeled.push(layers);
        q = q.quotient(&tr).0;
    }
    peeled.reverse();
    let all: Vec<Layer> = peeled.into_iter().flatten().collect();
    let (layers, boundary_layers): (Vec<Layer>, Vec<Layer>) = all.into_iter().partition(|l| l.degree < h);
    let status = match failed_at {
        Some(k) if k < h => FiltrationStatus::Failed,
        Some(_) => FiltrationStatus::TruncatedAtN,
        None if boundary_layers.is_empty() => FiltrationStatus::Complete,
        None => FiltrationStatus::TruncatedAtN,
    };
    let diagnosis = if status == FiltrationStatus::Failed { ext_diagnosis(ctx, m) } else { Vec::new() };
    FiltrationReport { layers, boundary_layers, status, failed_at, diagnosis }
}

/// Nonzero `ext^1(M, ∇̄(λ)<j>)` over shifts keeping `∇̄(λ)<j>` in the window.
pub fn ext_diagnosis(ctx: &Context, m: &GradedModule) -> Vec<ExtWitness> {
    let Ok(res) = minimal_projective_resolution(ctx, m, 2) else { return Vec::new() };
    let h = ctx.horizon;
    let shifts: Vec<i64> = (-(h - 1)..=h).collect();
    let mut out = Vec::new();
    for v in 0..ctx.nverts() {
        let nb = strat_module(ctx, StratKind::ProperCostandard, v);
        let t = ext_with(ctx, &res, &nb, 1, &shifts);
        for (k, &j) in shifts.iter().enumerate() {
            let cell = t.cells[1][k];
            if cell.dim > 0 {
                out.push(ExtWitness { vertex: v, shift: j, dim: cell.dim, exact: cell.exact });
            }
        }
    }
    out
}

/// Which filtration a multiplicity refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiltrationKind {
    Delta,
    ProperNabla,
}

/// `[M : Δ(λ)<j>] = dim hom(M, ∇̄(λ)<j>)`, or `[M : ∇̄(λ)<j>] = dim
/// hom(Δ(λ)<j>, M)`. Refuses when `certified` is false.
pub fn filtration_multiplicity(ctx: &Context, m: &GradedModule, kind: FiltrationKind, lambda: usize, j: i64, certified: bool) -> crate::Result<usize> {
    if !certified {
        return Err(crate::Error::Refused("module has no certified filtration".into()));
    }
    Ok(match kind {
        FiltrationKind::Delta => {
            let nb = strat_module(ctx, StratKind::ProperCostandard, lambda).shift(j);
            hom_dim(m, &nb)
        }
        FiltrationKind::ProperNabla => {
            let d = standard_to(ctx, lambda, ctx.horizon + j.max(0)).shift(j);
            hom_dim(&d, m)
        }
    })
}

/// `[I(λ) : ∇̄(μ)<j>] = dim hom(Δ(μ)<j>, I(λ))` for `0 <= j <= N`, keyed
/// by `(μ, j)`; zero entries are omitted.
pub fn injective_nabla_multiplicities(ctx: &Context, lambda: usize) -> BTreeMap<(usize, i64), usize> {
    let h = ctx.horizon;
    let inj = injective(&ctx.op, lambda, -h);
    let mut out = BTreeMap::new();
    for mu in 0..ctx.nverts() {
        let d = standard_to(ctx, mu, 2 * h);
        for j in 0..=h {
            let n = hom_dim(&d.shift(j), &inj);
            if n > 0 {
                out.insert((mu, j), n);
            }
        }
    }
    out
}

/// Outcome of the standardly-stratified test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratReport {
    pub verdict: Verdict,
    /// Filtration of `K(λ) = ker(P(λ) -> Δ(λ))` for every `λ`.
    pub kernels: Vec<FiltrationReport>,
    pub per_vertex: Vec<Verdict>,
}

/// Decides at the truncation degree whether every `K(λ)` has a finite
/// Δ-filtration.
pub fn is_standardly_stratified(ctx: &Context) -> StratReport {
    let h = ctx.horizon;
    let mut kernels = Vec::new();
    let mut per_vertex = Vec::new();
    for lambda in 0..ctx.nverts() {
        let p = projective(&ctx.alg, lambda, 0, h);
        let tr = p.trace(|mu, _| ctx.order.lt(lambda, mu));
        let (k, _) = p.submodule(&tr);
        let rep = delta_filtration(ctx, &k);
        let verdict = match rep.status {
            FiltrationStatus::Complete => Verdict::Holds,
            FiltrationStatus::Failed => Verdict::Violated,
            FiltrationStatus::TruncatedAtN => {
                if recurring(&rep, h) {
                    Verdict::Violated
                } else {
                    Verdict::Undetermined
                }
            }
        };
        kernels.push(rep);
        per_vertex.push(verdict);
    }
    let verdict = per_vertex.iter().fold(Verdict::Holds, |a, &b| a.and(b));
    StratReport { verdict, kernels, per_vertex }
}

/// Layers of one vertex occur with the same multiplicity in the last two
/// degree bands below and at the boundary.
fn recurring(rep: &FiltrationReport, h: i64) -> bool {
    let count = |v: usize, d: i64| -> usize { rep.layers.iter().chain(&rep.boundary_layers).filter(|l| l.vertex == v && l.degree == d).count() };
    rep.boundary_layers.iter().any(|l| {
        let c = count(l.vertex, h);
        c > 0 && count(l.vertex, h - 1) == c && count(l.vertex, h - 2) == c
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::{arrow_loop, commuting_loops, kx, loop_arrow};
    use crate::projective::simple;

    fn ctx(p: crate::algebra::Presentation) -> Context {
        let n = p.quiver.vertices.len();
        Context::new(&p, StratOrder::chain(n), 6).unwrap()
    }

    #[test]
    fn maximal_standard_is_projective() {
        let c = ctx(commuting_loops(6));
        assert_eq!(strat_module(&c, StratKind::Standard, 1), projective(&c.alg, 1, 0, 6));
        let c1 = ctx(loop_arrow(6));
        let d2 = strat_module(&c1, StratKind::Standard, 1);
        assert_eq!(d2.graded_dims(), vec![(0, vec![0, 1])]);
        assert!(d2.is_finite());
    }

    #[test]
    fn loop_arrow_standard_of_first_vertex() {
        let c = ctx(loop_arrow(6));
        let d1 = strat_module(&c, StratKind::Standard, 0);
        for j in 0..=6 {
            assert_eq!(d1.dim_at(0, j), 1);
            assert_eq!(d1.dim_at(1, j), 0);
        }
    }

    #[test]
    fn commuting_loops_proper_costandard() {
        let c = ctx(commuting_loops(6));
        let nb2 = strat_module(&c, StratKind::ProperCostandard, 1);
        assert!(nb2.is_finite());
        assert_eq!(nb2.graded_dims(), vec![(-1, vec![1, 0]), (0, vec![0, 1])]);
        let nb1 = strat_module(&c, StratKind::ProperCostandard, 0);
        assert_eq!(nb1.graded_dims(), vec![(0, vec![1, 0])]);
    }

    #[test]
    fn commuting_loops_is_stratified() {
        let c = ctx(commuting_loops(6));
        let r = is_standardly_stratified(&c);
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.kernels[0].layers, vec![Layer { kind: Kind::Standard, vertex: 1, shift: -1, degree: 1 }]);
        assert!(r.kernels[1].layers.is_empty());
    }

    #[test]
    fn loop_arrow_is_violated() {
        let c = ctx(loop_arrow(8));
        let r = is_standardly_stratified(&c);
        assert_eq!(r.verdict, Verdict::Violated);
        let degrees: Vec<i64> = r.kernels[0].layers.iter().map(|l| l.degree).collect();
        assert_eq!(degrees, (1..8).collect::<Vec<_>>());
        assert!(r.kernels[0].layers.iter().all(|l| l.vertex == 1));
    }

    #[test]
    fn full_relation_always_holds() {
        for p in [loop_arrow(5), arrow_loop(5), commuting_loops(5)] {
            let c = Context::new(&p, StratOrder::full(2), 4).unwrap();
            let r = is_standardly_stratified(&c);
            assert_eq!(r.verdict, Verdict::Holds);
            for v in 0..2 {
                assert_eq!(strat_module(&c, StratKind::Standard, v), projective(&c.alg, v, 0, 5));
            }
        }
    }

    #[test]
    fn arrow_loop_kernel_is_one_layer() {
        let c = ctx(arrow_loop(6));
        let r = is_standardly_stratified(&c);
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.kernels[0].layers.len(), 1);
        assert_eq!(r.kernels[0].layers[0].vertex, 1);
    }

    #[test]
    fn filtrations_and_multiplicities() {
        let c = ctx(commuting_loops(6));
        let d1 = strat_module(&c, StratKind::Standard, 0);
        let f = delta_filtration(&c, &d1);
        assert_eq!(f.layers, vec![Layer { kind: Kind::Standard, vertex: 0, shift: 0, degree: 0 }]);
        let p1 = projective(&c.alg, 0, 0, 6);
        let f = delta_filtration(&c, &p1);
        assert_eq!(f.status, FiltrationStatus::Complete);
        let degs: Vec<(usize, i64)> = f.layers.iter().map(|l| (l.vertex, l.degree)).collect();
        assert_eq!(degs, vec![(0, 0), (1, 1)]);
        assert_eq!(filtration_multiplicity(&c, &p1, FiltrationKind::Delta, 1, -1, true).unwrap(), 1);
        assert_eq!(filtration_multiplicity(&c, &p1, FiltrationKind::Delta, 1, 0, true).unwrap(), 0);
        assert!(filtration_multiplicity(&c, &p1, FiltrationKind::Delta, 1, 0, false).is_err());
        for lam in 0..2 {
            let d = strat_module(&c, StratKind::Standard, lam);
            for mu in 0..2 {
                for j in -3..=3 {
                    let want = usize::from(lam == mu && j == 0);
                    assert_eq!(filtration_multiplicity(&c, &d, FiltrationKind::Delta, mu, j, true).unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn simple_is_not_delta_filtered() {
        let c = ctx(commuting_loops(6));
        let l1 = simple(&c.alg, 0, 0);
        let f = delta_filtration(&c, &l1);
        assert_eq!(f.status, FiltrationStatus::Failed);
        assert!(f.diagnosis.iter().any(|w| w.vertex == 0 && w.dim > 0));
    }

    #[test]
    fn injective_multiplicities() {
        let c = ctx(commuting_loops(6));
        let t = injective_nabla_multiplicities(&c, 1);
        for j in 0..=6 {
            assert_eq!(t.get(&(1, j)), Some(&1));
        }
        let k = ctx(kx(4));
        let t = injective_nabla_multiplicities(&k, 0);
        assert_eq!(t.get(&(0, 0)), Some(&1));
        let trivial = Context::new(&crate::algebra::tests::pres(&["1"], vec![], vec![], 3), StratOrder::full(1), 2).unwrap();
        let t = injective_nabla_multiplicities(&trivial, 0);
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![((0, 0), 1)]);
    }
}
