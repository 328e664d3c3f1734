//! The line-oriented presentation format.
//!
//! ```text
//! field Q
//! vertex 1
//! vertex 2
//! arrow b1 1 1
//! arrow b2 2 2
//! arrow alpha 1 2
//! relation alpha*b2 - b1*alpha
//! order 1 < 2
//! truncate 8
//! depth 6
//! ```
//!
//! `#` starts a comment. Arrow degrees default to 1. Paths are written
//! left to right: `alpha*b2` traverses `alpha` first. Each `order` line is
//! a chain of classes, a class being a comma-separated vertex list; every
//! vertex must lie in exactly one class. Without `order` lines the
//! vertices form a chain in declaration order.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{Arrow, Presentation, Quiver, Relation};
use crate::error::{Error, Result};
use crate::linalg::Field;
use crate::strat::StratOrder;

pub const DEFAULT_TRUNCATION: usize = 8;
pub const DEFAULT_DEPTH: usize = 6;

/// A parsed input file. Coefficients stay rational until a field is fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub field: Option<Field>,
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Vec<(BigRational, Vec<usize>)>>,
    /// Classes (vertex index lists) and chains over class indices.
    pub classes: Vec<Vec<usize>>,
    pub chains: Vec<Vec<usize>>,
    pub truncation: Option<usize>,
    pub depth: Option<usize>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || "*+-,<#".contains(c))
}

/// Parses a field name: `Q`, `GF(p)` or `GF:p`.
pub fn parse_field(s: &str) -> Result<Field> {
    let s = s.trim();
    if s == "Q" {
        return Ok(Field::Rational);
    }
    let p = s
        .strip_prefix("GF(")
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| s.strip_prefix("GF:"))
        .ok_or_else(|| Error::Usage(format!("unknown field `{s}` (expected Q or GF(p))")))?;
    let p: u64 = p.trim().parse().map_err(|_| Error::Usage(format!("bad characteristic `{p}`")))?;
    Field::prime(p)
}

pub fn field_name(f: Field) -> String {
    match f {
        Field::Rational => "Q".into(),
        Field::Prime(p) => format!("GF({p})"),
    }
}

fn parse_coefficient(s: &str) -> Option<BigRational> {
    if !s.starts_with(|c: char| c.is_ascii_digit()) {
        return None;
    }
    BigRational::from_str(s).ok()
}

/// Splits a signed linear combination into `(sign, term)` pieces.
fn split_terms(s: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut neg = false;
    let mut cur = String::new();
    for c in s.chars() {
        if c == '+' || c == '-' {
            if !cur.trim().is_empty() {
                out.push((neg, cur.trim().to_string()));
                cur.clear();
                neg = false;
            }
            if c == '-' {
                neg = !neg;
            }
        } else {
            cur.push(c);
        }
    }
    if !cur.trim().is_empty() || out.is_empty() {
        out.push((neg, cur.trim().to_string()));
    }
    out
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        let mut doc = Document {
            field: None,
            vertices: Vec::new(),
            arrows: Vec::new(),
            relations: Vec::new(),
            classes: Vec::new(),
            chains: Vec::new(),
            truncation: None,
            depth: None,
        };
        let mut vindex: HashMap<String, usize> = HashMap::new();
        let mut aindex: HashMap<String, usize> = HashMap::new();
        let mut class_ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut class_of: HashMap<usize, usize> = HashMap::new();
        let mut order_lines: Vec<(usize, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match key {
                "field" => {
                    if doc.field.is_some() {
                        return Err(perr(ln, "field declared twice"));
                    }
                    doc.field = Some(parse_field(rest).map_err(|e| perr(ln, e.to_string()))?);
                }
                "vertex" => {
                    if !valid_name(rest) {
                        return Err(perr(ln, format!("bad vertex name `{rest}`")));
                    }
                    if vindex.insert(rest.to_string(), doc.vertices.len()).is_some() {
                        return Err(perr(ln, format!("duplicate vertex `{rest}`")));
                    }
                    doc.vertices.push(rest.to_string());
                }
                "arrow" => {
                    let f: Vec<&str> = rest.split_whitespace().collect();
                    if !(3..=4).contains(&f.len()) {
                        return Err(perr(ln, "expected `arrow <name> <src> <dst> [degree]`"));
                    }
                    if !valid_name(f[0]) {
                        return Err(perr(ln, format!("bad arrow name `{}`", f[0])));
                    }
                    if aindex.contains_key(f[0]) {
                        return Err(perr(ln, format!("duplicate arrow name `{}`", f[0])));
                    }
                    let vert = |v: &str| vindex.get(v).copied().ok_or_else(|| perr(ln, format!("unknown vertex `{v}`")));
                    let (src, dst) = (vert(f[1])?, vert(f[2])?);
                    let degree = match f.get(3) {
                        Some(d) => d.parse::<usize>().map_err(|_| perr(ln, format!("bad degree `{d}`")))?,
                        None => 1,
                    };
                    if degree == 0 {
                        return Err(perr(ln, format!("arrow `{}` has degree 0", f[0])));
                    }
                    aindex.insert(f[0].to_string(), doc.arrows.len());
                    doc.arrows.push(Arrow { name: f[0].to_string(), src, dst, degree });
                }
                "relation" => {
                    let rel = doc.parse_relation(rest, &aindex, ln)?;
                    if !rel.is_empty() {
                        doc.relations.push(rel);
                    }
                }
                "order" => order_lines.push((ln, rest.to_string())),
                "truncate" | "depth" => {
                    let v: usize = rest.parse().map_err(|_| perr(ln, format!("bad {key} value `{rest}`")))?;
                    if v == 0 {
                        return Err(perr(ln, format!("{key} must be at least 1")));
                    }
                    if key == "truncate" {
                        doc.truncation = Some(v);
                    } else {
                        doc.depth = Some(v);
                    }
                }
                other => return Err(perr(ln, format!("unknown keyword `{other}`"))),
            }
        }
        if doc.vertices.is_empty() {
            return Err(perr(text.lines().count().max(1), "no vertices declared"));
        }
        for (ln, line) in &order_lines {
            let mut chain = Vec::new();
            for part in line.split('<') {
                let mut members = Vec::new();
                for v in part.split(',').map(str::trim) {
                    let idx = *vindex.get(v).ok_or_else(|| perr(*ln, format!("unknown vertex `{v}` in order")))?;
                    if members.contains(&idx) {
                        return Err(perr(*ln, format!("vertex `{v}` repeated in a class")));
                    }
                    members.push(idx);
                }
                members.sort_unstable();
                let id = match class_ids.get(&members) {
                    Some(&id) => id,
                    None => {
                        for &m in &members {
                            if class_of.contains_key(&m) {
                                return Err(perr(*ln, format!("order is not a partition: `{}` lies in two classes", doc.vertices[m])));
                            }
                        }
                        let id = doc.classes.len();
                        for &m in &members {
                            class_of.insert(m, id);
                        }
                        class_ids.insert(members.clone(), id);
                        doc.classes.push(members);
                        id
                    }
                };
                chain.push(id);
            }
            doc.chains.push(chain);
        }
        if let Some((ln, _)) = order_lines.last() {
            if let Some(v) = (0..doc.vertices.len()).find(|v| !class_of.contains_key(v)) {
                return Err(perr(*ln, format!("order is not a partition: `{}` is in no class", doc.vertices[v])));
            }
            StratOrder::from_chains(doc.classes.clone(), &doc.chains, doc.vertices.len()).map_err(|e| perr(*ln, e.to_string()))?;
        }
        Ok(doc)
    }

    fn parse_relation(&self, s: &str, aindex: &HashMap<String, usize>, ln: usize) -> Result<Vec<(BigRational, Vec<usize>)>> {
        let mut terms: Vec<(BigRational, Vec<usize>)> = Vec::new();
        let mut shape = None;
        for (neg, t) in split_terms(s) {
            let mut factors: Vec<&str> = t.split(|c: char| c == '*' || c.is_whitespace()).filter(|f| !f.is_empty()).collect();
            let mut coef = BigRational::one();
            if let Some(c) = factors.first().and_then(|f| parse_coefficient(f)) {
                coef = c;
                factors.remove(0);
            }
            if neg {
                coef = -coef;
            }
            if factors.is_empty() {
                return Err(perr(ln, "relation term without arrows"));
            }
            let path: Vec<usize> =
                factors.iter().map(|f| aindex.get(*f).copied().ok_or_else(|| perr(ln, format!("unknown arrow `{f}`")))).collect::<Result<_>>()?;
            for w in path.windows(2) {
                if self.arrows[w[0]].dst != self.arrows[w[1]].src {
                    return Err(perr(ln, format!("`{t}` is not a path")));
                }
            }
            let sh = (self.arrows[path[0]].src, self.arrows[*path.last().expect("nonempty")].dst, path.iter().map(|&a| self.arrows[a].degree).sum::<usize>());
            match shape {
                None => shape = Some(sh),
                Some(s0) if (s0.0, s0.1) != (sh.0, sh.1) => return Err(perr(ln, "relation mixes paths with different endpoints")),
                Some(s0) if s0.2 != sh.2 => return Err(perr(ln, format!("relation is not homogeneous (degrees {} and {})", s0.2, sh.2))),
                _ => {}
            }
            match terms.iter_mut().find(|(_, p)| *p == path) {
                Some(e) => e.0 += coef,
                None => terms.push((coef, path)),
            }
        }
        terms.retain(|(c, _)| !c.is_zero());
        Ok(terms)
    }

    /// The presentation over the given field (defaulting to the declared one,
    /// then `Q`) truncated at `truncation` (defaulting likewise).
    pub fn presentation(&self, field: Option<Field>, truncation: Option<usize>) -> Result<Presentation> {
        let field = field.or(self.field).unwrap_or(Field::Rational);
        let relations = self
            .relations
            .iter()
            .map(|r| {
                let terms =
                    r.iter().map(|(c, p)| Ok((field.rational(c)?, p.clone()))).collect::<Result<Vec<_>>>()?.into_iter().filter(|(c, _)| !c.is_zero()).collect();
                Ok(Relation { terms })
            })
            .collect::<Result<Vec<_>>>()?;
        let p = Presentation {
            quiver: Quiver { vertices: self.vertices.clone(), arrows: self.arrows.clone() },
            relations,
            field,
            truncation: truncation.or(self.truncation).unwrap_or(DEFAULT_TRUNCATION),
        };
        p.validate()?;
        Ok(p)
    }

    /// The declared order, or the chain in declaration order.
    pub fn order(&self) -> StratOrder {
        if self.classes.is_empty() {
            StratOrder::chain(self.vertices.len())
        } else {
            StratOrder::from_chains(self.classes.clone(), &self.chains, self.vertices.len()).expect("checked while parsing")
        }
    }
}

/// Serializes a presentation with an order and depth in the input format.
pub fn write(p: &Presentation, order: &StratOrder, depth: usize) -> String {
    let q = &p.quiver;
    let mut s = String::new();
    let _ = writeln!(s, "field {}", field_name(p.field));
    for v in &q.vertices {
        let _ = writeln!(s, "vertex {v}");
    }
    for a in &q.arrows {
        if a.degree == 1 {
            let _ = writeln!(s, "arrow {} {} {}", a.name, q.vertices[a.src], q.vertices[a.dst]);
        } else {
            let _ = writeln!(s, "arrow {} {} {} {}", a.name, q.vertices[a.src], q.vertices[a.dst], a.degree);
        }
    }
    for r in &p.relations {
        let mut line = String::new();
        for (i, (c, path)) in r.terms.iter().enumerate() {
            let c = signed(c.to_rational(), p.field);
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => line.push('-'),
                (0, false) => {}
                (_, true) => line.push_str(" - "),
                (_, false) => line.push_str(" + "),
            }
            if !mag.is_one() {
                let _ = write!(line, "{mag}*");
            }
            line.push_str(&q.path_name(path));
        }
        let _ = writeln!(s, "relation {line}");
    }
    let name = |c: &[usize]| c.iter().map(|&v| q.vertices[v].as_str()).collect::<Vec<_>>().join(",");
    let classes = order.classes();
    let rels = order.relations();
    for (c, members) in classes.iter().enumerate() {
        if !rels.iter().any(|&(a, b)| a == c || b == c) {
            let _ = writeln!(s, "order {}", name(members));
        }
    }
    for (a, b) in rels {
        let _ = writeln!(s, "order {} < {}", name(&classes[a]), name(&classes[b]));
    }
    let _ = writeln!(s, "truncate {}", p.truncation);
    let _ = writeln!(s, "depth {depth}");
    s
}

/// Symmetric representative for prime fields, so `p - 1` prints as `-1`.
fn signed(q: BigRational, field: Field) -> BigRational {
    match field {
        Field::Prime(p) if q > BigRational::from_integer(BigInt::from(p / 2)) => q - BigRational::from_integer(BigInt::from(p)),
        _ => q,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXM3: &str = "field Q\nvertex 1\nvertex 2\narrow b1 1 1\narrow b2 2 2\narrow alpha 1 2\nrelation alpha*b2 - b1*alpha\norder 1 < 2\n";

    #[test]
    fn parses_commuting_loops() {
        let d = Document::parse(EXM3).unwrap();
        assert_eq!((d.vertices.len(), d.arrows.len(), d.relations.len()), (2, 3, 1));
        assert_eq!(d.order(), StratOrder::chain(2));
        let p = d.presentation(None, None).unwrap();
        assert_eq!(p.truncation, DEFAULT_TRUNCATION);
        assert_eq!(p.relations[0].terms[1].1, vec![0, 2]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let dup = "vertex 1\narrow a 1 1\narrow a 1 1\n";
        assert!(matches!(Document::parse(dup), Err(Error::Parse { line: 3, .. })));
        let inhom = "vertex 1\narrow a 1 1\narrow b 1 1 2\nrelation a*a - a*b\n";
        assert!(matches!(Document::parse(inhom), Err(Error::Parse { line: 4, .. })));
        let part = "vertex 1\nvertex 2\norder 1 < 1,2\n";
        assert!(matches!(Document::parse(part), Err(Error::Parse { line: 3, .. })));
        let missing = "vertex 1\nvertex 2\norder 1\n";
        assert!(matches!(Document::parse(missing), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(Document::parse("# nothing\n"), Err(Error::Parse { .. })));
        assert!(matches!(Document::parse("vertex 1\nbogus\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn coefficients_and_fields() {
        let t = "field GF(3)\nvertex 1\narrow x 1 1\narrow y 1 1\nrelation 2*x*y + 1/2 y*x - x*y\n";
        let d = Document::parse(t).unwrap();
        assert_eq!(d.relations[0][0].0, BigRational::one());
        let p = d.presentation(None, Some(4)).unwrap();
        assert_eq!(p.field, Field::Prime(3));
        // 1/2 = 2 in GF(3).
        assert_eq!(p.relations[0].terms[1].0, Field::Prime(3).int(2));
        assert!(d.presentation(Some(Field::Prime(2)), None).is_err());
    }

    #[test]
    fn round_trip() {
        let d = Document::parse(EXM3).unwrap();
        let p = d.presentation(None, Some(5)).unwrap();
        let text = write(&p, &d.order(), 4);
        let d2 = Document::parse(&text).unwrap();
        assert_eq!(d2.presentation(None, None).unwrap(), p);
        assert_eq!(d2.order(), d.order());
        assert_eq!(d2.depth, Some(4));
    }
}
