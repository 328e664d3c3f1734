//! Inputs shared by the engine benchmarks.

use tiltkit::context::Context;
use tiltkit::text::Document;

/// Loops at both vertices commuting with the arrow between them.
pub const COMMUTING_LOOPS: &str = "\
field Q
vertex 1
vertex 2
arrow b1 1 1
arrow b2 2 2
arrow a 1 2
relation a*b2 - b1*a
order 1 < 2
";

/// Polynomial ring in one variable of degree one.
pub const POLYNOMIAL: &str = "\
field Q
vertex 1
arrow x 1 1
";

pub fn context(text: &str, truncation: usize, depth: usize) -> Context {
    let doc = Document::parse(text).expect("benchmark input parses");
    let p = doc.presentation(None, Some(truncation)).expect("benchmark input is valid");
    Context::new(&p, doc.order(), depth).expect("benchmark context builds")
}
