//! One function per command. Each returns the report body; the `exact`
//! map collects values that do not change when the truncation grows.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use tiltkit::algebra::validate_positive;
use tiltkit::context::Context;
use tiltkit::duality::{check_commutativity, koszul_dual, ringel_dual_with, ringel_image_of_standard, Comparison, PresentationOut};
use tiltkit::error::Result;
use tiltkit::homology::{is_koszul, Complex};
use tiltkit::module::GradedModule;
use tiltkit::strat::{is_standardly_stratified, strat_module, FiltrationStatus, Layer, StratKind, Verdict};
use tiltkit::tcomplex::TiltingSet;
use tiltkit::text;
use tiltkit::tilting::{classify, tilting_module, AlgebraClass};
use tiltkit::Presentation;

use crate::{Body, Command, JobSpec, Status};

/// Commutativity search budget (signed arrow bijections).
const SEARCH_BUDGET: usize = 100_000;

pub(crate) fn dispatch(job: &JobSpec, ctx: &Context) -> Result<Body> {
    match job.command {
        Command::Validate => validate(ctx),
        Command::Stratify => stratify(ctx),
        Command::StandardModules => standard_modules(ctx),
        Command::Tilting => tilting(ctx),
        Command::Classify => classification(ctx),
        Command::Ringel => ringel(ctx),
        Command::Koszul => koszul(ctx),
        Command::Commute => commute(ctx),
        Command::SimplesAsTilting => simples(ctx),
    }
}

/// `3 arrows`, `1 relation`.
fn count(n: usize, one: &str, many: &str) -> String {
    format!("{n} {}", if n == 1 { one } else { many })
}

fn names(ctx: &Context) -> Vec<String> {
    ctx.presentation().quiver.vertices.clone()
}

fn layer_name(ctx: &Context, l: &Layer) -> String {
    format!("{}({})<{}>", l.kind.symbol(), ctx.vertex_name(l.vertex), l.shift)
}

fn layer_json(ctx: &Context, l: &Layer) -> Value {
    json!({ "kind": l.kind.symbol(), "vertex": ctx.vertex_name(l.vertex), "shift": l.shift, "degree": l.degree })
}

fn dims_json(ctx: &Context, m: &GradedModule) -> Value {
    let rows: Vec<Value> = m
        .graded_dims()
        .into_iter()
        .map(|(d, v)| {
            let per: serde_json::Map<String, Value> = v.iter().enumerate().map(|(i, x)| (ctx.vertex_name(i).to_string(), json!(x))).collect();
            json!({ "degree": d, "dims": per })
        })
        .collect();
    Value::Array(rows)
}

/// Layer names grouped by degree, for degrees up to `top`.
fn layers_by_degree(ctx: &Context, layers: &[Layer], top: i64) -> BTreeMap<i64, Vec<String>> {
    let mut m: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    for l in layers.iter().filter(|l| l.degree <= top) {
        m.entry(l.degree).or_default().push(layer_name(ctx, l));
    }
    for v in m.values_mut() {
        v.sort();
    }
    m
}

fn validate(ctx: &Context) -> Result<Body> {
    let rep = validate_positive(&ctx.alg);
    let n = ctx.horizon as usize;
    let mut exact = BTreeMap::new();
    let cartan: Vec<Value> = (0..=n)
        .map(|d| {
            let c = ctx.alg.cartan(d);
            exact.insert(format!("cartan.d{d}"), json!(c));
            json!({ "degree": d, "matrix": c })
        })
        .collect();
    let status = if rep.ok { Status::Computed } else { Status::Violated };
    let summary = if rep.ok {
        format!(
            "positively graded; {}, {}, {}",
            count(ctx.nverts(), "vertex", "vertices"),
            count(ctx.presentation().quiver.arrows.len(), "arrow", "arrows"),
            count(ctx.presentation().relations.len(), "relation", "relations")
        )
    } else {
        format!("not positively graded: {}", rep.violations.join("; "))
    };
    Ok(Body { result: json!({ "positive": rep.ok, "violations": rep.violations, "cartan": cartan }), exact, status, summary })
}

fn stratify(ctx: &Context) -> Result<Body> {
    let rep = is_standardly_stratified(ctx);
    let h = ctx.horizon;
    let mut exact = BTreeMap::new();
    if rep.verdict != Verdict::Undetermined {
        exact.insert("verdict".into(), json!(rep.verdict.as_str()));
    }
    let mut per = Vec::new();
    let mut notes = Vec::new();
    for (v, (k, verdict)) in rep.kernels.iter().zip(&rep.per_vertex).enumerate() {
        let name = ctx.vertex_name(v);
        for (d, ls) in layers_by_degree(ctx, &k.layers, h - 2) {
            exact.insert(format!("K({name}).layers.deg{d}"), json!(ls));
        }
        if *verdict == Verdict::Violated && k.status == FiltrationStatus::TruncatedAtN {
            let kinds: Vec<String> = k.boundary_layers.iter().map(|l| format!("{}({})", l.kind.symbol(), ctx.vertex_name(l.vertex))).collect();
            notes.push(format!("K({name}) needs layers {} in every degree up to N", kinds.join(", ")));
        }
        per.push(json!({
            "vertex": name,
            "verdict": verdict.as_str(),
            "status": k.status.as_str(),
            "layers": k.layers.iter().map(|l| layer_json(ctx, l)).collect::<Vec<_>>(),
            "boundary_layers": k.boundary_layers.iter().map(|l| layer_json(ctx, l)).collect::<Vec<_>>(),
            "failed_at": k.failed_at,
            "diagnosis": k.diagnosis.iter().map(|w| json!({"vertex": ctx.vertex_name(w.vertex), "shift": w.shift, "dim": w.dim, "exact": w.exact})).collect::<Vec<_>>(),
        }));
    }
    let mut summary = rep.verdict.as_str().to_string();
    if !notes.is_empty() {
        summary = format!("{summary}: {}", notes.join("; "));
    }
    Ok(Body { result: json!({ "verdict": rep.verdict.as_str(), "kernels": per }), exact, status: Status::from_verdict(rep.verdict), summary })
}

fn standard_modules(ctx: &Context) -> Result<Body> {
    let h = ctx.horizon;
    let mut exact = BTreeMap::new();
    let mut out = Vec::new();
    for v in 0..ctx.nverts() {
        for kind in [StratKind::Standard, StratKind::ProperStandard, StratKind::Costandard, StratKind::ProperCostandard] {
            let m = strat_module(ctx, kind, v);
            let label = format!("{}({})", kind.kind().symbol(), ctx.vertex_name(v));
            let finite = m.is_finite();
            if finite {
                exact.insert(format!("{label}.dims"), dims_json(ctx, &m));
            } else {
                for (d, dims) in m.graded_dims() {
                    if d.abs() < h {
                        exact.insert(format!("{label}.d{d}"), json!(dims));
                    }
                }
            }
            out.push(json!({ "module": label, "finite": finite, "dims": dims_json(ctx, &m) }));
        }
    }
    Ok(Body { summary: format!("{} computed", count(out.len(), "module", "modules")), result: json!({ "modules": out }), exact, status: Status::Computed })
}

fn tilting(ctx: &Context) -> Result<Body> {
    let h = ctx.horizon;
    let mut exact = BTreeMap::new();
    let mut out = Vec::new();
    let mut flagged = Vec::new();
    for v in 0..ctx.nverts() {
        let t = tilting_module(ctx, v)?;
        let name = ctx.vertex_name(v).to_string();
        let flag = if t.finitely_constructed { "finitely constructible" } else { "not finitely constructible at N" };
        if t.finitely_constructed {
            exact.insert(format!("T({name}).layers"), json!(t.layers.iter().map(|l| layer_name(ctx, l)).collect::<Vec<_>>()));
            if t.module.is_finite() {
                exact.insert(format!("T({name}).dims"), dims_json(ctx, &t.module));
            } else {
                for (d, dims) in t.module.graded_dims() {
                    if d < h - 1 {
                        exact.insert(format!("T({name}).d{d}"), json!(dims));
                    }
                }
            }
        } else {
            flagged.push(format!("T({name})"));
            for (d, ls) in layers_by_degree(ctx, &t.layers, h - 3).into_iter().filter(|&(d, _)| d >= ctx.floor() + 3) {
                exact.insert(format!("T({name}).layers.deg{d}"), json!(ls));
            }
        }
        out.push(json!({
            "vertex": name,
            "construction": flag,
            "finitely_constructed": t.finitely_constructed,
            "indecomposable": t.indecomposable,
            "layers": t.layers.iter().map(|l| layer_json(ctx, l)).collect::<Vec<_>>(),
            "dims": dims_json(ctx, &t.module),
        }));
    }
    let (status, summary) = if flagged.is_empty() {
        (Status::Computed, "every tilting module is finitely constructible".to_string())
    } else {
        (Status::Violated, format!("{} not finitely constructible at N", flagged.join(", ")))
    };
    Ok(Body { result: json!({ "tilting": out }), exact, status, summary })
}

fn describe_all(cs: &[Complex], names: &[String]) -> Vec<String> {
    cs.iter().map(|c| c.describe(names)).collect()
}

fn classification(ctx: &Context) -> Result<Body> {
    let c = classify(ctx)?;
    let nm = names(ctx);
    let mut exact = BTreeMap::new();
    let props = [("stratified", c.stratified), ("weakly adapted", c.weakly_adapted), ("adapted", c.adapted), ("balanced", c.balanced)];
    for (p, v) in props {
        if v != Verdict::Undetermined {
            exact.insert(format!("verdict.{}", p.replace(' ', "-")), json!(v.as_str()));
        }
    }
    let verdict = c.verdict();
    if verdict != Verdict::Undetermined {
        exact.insert("class".into(), json!(c.class.as_str()));
    }
    let summary = if c.class == AlgebraClass::Balanced {
        "balanced at N".to_string()
    } else {
        let mut parts: Vec<String> = props.iter().take_while(|(_, v)| *v == Verdict::Holds).map(|(p, _)| p.to_string()).collect();
        if let Some((p, v)) = props.iter().find(|(_, v)| *v != Verdict::Holds) {
            parts.push(format!("not {p} ({})", v.as_str()));
        }
        parts.join("; ")
    };
    let cores = describe_all(&c.coresolutions, &nm);
    let res = describe_all(&c.resolutions, &nm);
    if c.class == AlgebraClass::Balanced {
        exact.insert("coresolutions".into(), json!(cores));
        exact.insert("resolutions".into(), json!(res));
    }
    Ok(Body {
        result: json!({
            "class": c.class.as_str(),
            "stratified": c.stratified.as_str(),
            "weakly_adapted": c.weakly_adapted.as_str(),
            "adapted": c.adapted.as_str(),
            "balanced": c.balanced.as_str(),
            "notes": c.notes,
            "standard_coresolutions": cores,
            "proper_costandard_resolutions": res,
        }),
        exact,
        status: Status::from_verdict(verdict),
        summary,
    })
}

fn relation_strings(p: &Presentation) -> Vec<String> {
    let t = text::write(p, &tiltkit::StratOrder::chain(p.quiver.vertices.len()), 1);
    t.lines().filter_map(|l| l.strip_prefix("relation ")).map(str::to_string).collect()
}

fn dual_body(ctx: &Context, out: &PresentationOut, what: &str) -> (Value, BTreeMap<String, Value>) {
    let p = &out.presentation;
    let q = &p.quiver;
    let mut exact = BTreeMap::new();
    for (d, c) in out.cartan.iter().enumerate() {
        exact.insert(format!("cartan.d{d}"), json!(c));
    }
    for d in 1..=out.reliable_degree {
        let mut shapes: Vec<String> = q.arrows.iter().filter(|a| a.degree == d).map(|a| format!("{}->{}", q.vertices[a.src], q.vertices[a.dst])).collect();
        shapes.sort();
        exact.insert(format!("arrows.d{d}"), json!(shapes));
    }
    let body = json!({
        "algebra": what,
        "reliable_degree": out.reliable_degree,
        "arrows": q.arrows.iter().map(|a| json!({"name": a.name, "src": q.vertices[a.src], "dst": q.vertices[a.dst], "degree": a.degree})).collect::<Vec<_>>(),
        "relations": relation_strings(p),
        "cartan": out.cartan,
        "presentation_text": text::write(p, &out.order, ctx.depth),
    });
    (body, exact)
}

fn ringel(ctx: &Context) -> Result<Body> {
    let ts = TiltingSet::build(ctx)?;
    let out = ringel_dual_with(ctx, &ts)?;
    let (mut body, exact) = dual_body(ctx, &out, "ringel dual");
    let mut verdict = Verdict::Holds;
    let mut images = Vec::new();
    for v in 0..ctx.nverts() {
        let im = ringel_image_of_standard(ctx, &ts, &out, v)?;
        verdict = verdict.and(im.isomorphic);
        images.push(json!({ "vertex": ctx.vertex_name(v), "dims_match": im.dims_match, "isomorphic": im.isomorphic.as_str() }));
    }
    body["standard_images"] = Value::Array(images);
    let summary = format!(
        "ringel dual with {} and {}, exact through degree {}; images of standard modules: {}",
        count(out.presentation.quiver.arrows.len(), "arrow", "arrows"),
        count(out.presentation.relations.len(), "relation", "relations"),
        out.reliable_degree,
        verdict.as_str()
    );
    Ok(Body { result: body, exact, status: Status::from_verdict(verdict), summary })
}

fn koszul(ctx: &Context) -> Result<Body> {
    let rep = is_koszul(ctx, ctx.depth)?;
    let out = koszul_dual(ctx, ctx.depth)?;
    let (mut body, exact) = dual_body(ctx, &out, "koszul dual");
    body["resolutions_exact"] = json!(rep.exact);
    let summary = format!(
        "koszul dual with {} and {}, exact through degree {}",
        count(out.presentation.quiver.arrows.len(), "arrow", "arrows"),
        count(out.presentation.relations.len(), "relation", "relations"),
        out.reliable_degree
    );
    Ok(Body { result: body, exact, status: Status::Computed, summary })
}

fn commute(ctx: &Context) -> Result<Body> {
    let rep = check_commutativity(ctx, ctx.depth, SEARCH_BUDGET)?;
    let mut exact = BTreeMap::new();
    let (text_verdict, detail) = match &rep.comparison {
        Comparison::Isomorphic { vertex_map, arrow_map } => {
            let q1 = &rep.ringel_of_koszul.presentation.quiver;
            let q2 = &rep.koszul_of_ringel.presentation.quiver;
            let arrows: Vec<String> = arrow_map
                .iter()
                .enumerate()
                .map(|(i, &(j, neg))| format!("{} -> {}{}", q1.arrows[i].name, if neg { "-" } else { "" }, q2.arrows[j].name))
                .collect();
            exact.insert("comparison".into(), json!("isomorphic at N"));
            ("isomorphic at N".to_string(), json!({ "vertex_map": vertex_map, "arrow_map": arrows }))
        }
        Comparison::Distinguished(w) => (format!("distinguished: {w}"), json!({ "witness": w })),
        Comparison::Undetermined(w) => (format!("undetermined at N: {w}"), json!({ "reason": w })),
    };
    let show = |o: &PresentationOut| json!({ "arrows": o.presentation.quiver.arrows.len(), "relations": relation_strings(&o.presentation), "reliable_degree": o.reliable_degree });
    Ok(Body {
        result: json!({
            "comparison": text_verdict,
            "degree": rep.degree,
            "detail": detail,
            "koszul": show(&rep.koszul),
            "ringel": show(&rep.ringel),
            "ringel_of_koszul": show(&rep.ringel_of_koszul),
            "koszul_of_ringel": show(&rep.koszul_of_ringel),
        }),
        exact,
        status: Status::from_verdict(rep.comparison.verdict()),
        summary: text_verdict,
    })
}

fn simples(ctx: &Context) -> Result<Body> {
    let ts = TiltingSet::build(ctx)?;
    if let Some(t) = ts.tilts.iter().find(|t| !t.finitely_constructed) {
        return Err(tiltkit::Error::Refused(format!("T({}) is not finitely constructible at N", ctx.vertex_name(t.vertex))));
    }
    let nm = names(ctx);
    let mut memo = BTreeMap::new();
    let mut exact = BTreeMap::new();
    let mut out = Vec::new();
    let mut all_linear = true;
    for v in 0..ctx.nverts() {
        let c = ts.simple_complex(ctx, v, &mut memo)?;
        let desc = c.to_complex(&ts).describe(&nm);
        let linear = c.is_linear();
        all_linear &= linear;
        if linear {
            exact.insert(format!("L({}).complex", nm[v]), json!(desc));
        }
        let homology: Vec<Value> = c
            .homology_dims(&ts)
            .into_iter()
            .map(|(pos, ds)| json!({ "position": pos, "dims": ds.into_iter().map(|(d, x)| json!({"degree": d, "dims": x})).collect::<Vec<_>>() }))
            .collect();
        out.push(json!({
            "vertex": nm[v],
            "complex": desc,
            "linear": linear,
            "d_squared_zero": c.d_squared_zero(&ts),
            "homology": homology,
        }));
    }
    let (status, summary) = if all_linear {
        (Status::Computed, "every simple module is a linear complex of tilting modules".to_string())
    } else {
        (Status::Violated, "some simple module is not a linear complex of tilting modules".to_string())
    };
    Ok(Body { result: json!({ "simples": out }), exact, status, summary })
}
