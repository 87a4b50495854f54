//! Command dispatch and report rendering for the `hahnroot` binary.

use std::fmt::Write as _;

use hahnroot::corpus::corpus;
use hahnroot::envelope::{intersection_points, maxexp_of, maxram_of, order_type_bound_of, MaxExp, MaxExpMode};
use hahnroot::expand::{expand_roots, ExpansionTree, Status};
use hahnroot::ffield::FieldCtx;
use hahnroot::hasse::Poly;
use hahnroot::ore::addpol;
use hahnroot::parse::{parse_over, ParseError};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

/// Version tag carried by every JSON document.
pub const SCHEMA: &str = "hahnroot-json/1";

/// Largest degree of a polynomial generated from `--seed`.
pub const SEED_MAX_DEGREE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    Roots,
    Addpol,
    Intersections,
    Bounds,
    OrderBound,
}

impl Verb {
    pub fn name(self) -> &'static str {
        match self {
            Verb::Roots => "roots",
            Verb::Addpol => "addpol",
            Verb::Intersections => "intersections",
            Verb::Bounds => "bounds",
            Verb::OrderBound => "order-bound",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Where the polynomial comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Text(String),
    /// A reproducible random polynomial of degree ≤ [`SEED_MAX_DEGREE`].
    Seed(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Command {
    pub verb: Verb,
    pub p: u64,
    pub input: Input,
    pub depth: usize,
    pub format: Format,
    pub mode: MaxExpMode,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Kernel(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(ParseError::Field(_)) | CliError::Config(_) => "config",
            CliError::Parse(_) => "parse",
            CliError::Kernel(_) => "kernel",
        }
    }

    pub fn to_json(&self) -> Value {
        let position = match self {
            CliError::Parse(e) => e.position(),
            _ => None,
        };
        json!({
            "schema": SCHEMA,
            "error": { "kind": self.kind(), "message": self.to_string(), "position": position },
        })
    }
}

/// Result of a command in both renderings.
#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub json: Value,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable report"),
        }
    }
}

pub fn resolve_poly(cmd: &Command) -> Result<Poly, CliError> {
    let ctx = FieldCtx::prime_field(cmd.p).map_err(ParseError::from)?;
    let f = match &cmd.input {
        Input::Text(text) => parse_over(text, &ctx)?,
        Input::Seed(seed) => corpus(*seed, 1, &[cmd.p], SEED_MAX_DEGREE).remove(0),
    };
    if f.degree().map_or(true, |d| d == 0) {
        return Err(CliError::Config(format!("'{f}' has no roots to expand: degree must be at least 1")));
    }
    Ok(f)
}

pub fn run(cmd: &Command) -> Result<Report, CliError> {
    if cmd.verb == Verb::Roots && cmd.depth == 0 {
        return Err(CliError::Config("depth must be at least 1".into()));
    }
    let f = resolve_poly(cmd)?;
    let (text, mut json) = match cmd.verb {
        Verb::Roots => roots(&f, cmd.depth)?,
        Verb::Addpol => addpol_report(&f)?,
        Verb::Intersections => intersections(&f)?,
        Verb::Bounds => bounds(&f, cmd.mode)?,
        Verb::OrderBound => order_bound(&f)?,
    };
    let header = json!({
        "schema": SCHEMA,
        "command": cmd.verb.name(),
        "p": cmd.p,
        "input": f.to_string(),
    });
    for (k, v) in header.as_object().unwrap() {
        json[k] = v.clone();
    }
    Ok(Report { text, json })
}

fn kernel<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Kernel(e.to_string())
}

/// A big integer as a JSON number when it fits, else as a decimal string.
fn big(n: &BigUint) -> Value {
    n.to_u64().map_or_else(|| json!(n.to_string()), |v| json!(v))
}

fn roots(f: &Poly, depth: usize) -> Result<(String, Value), CliError> {
    let tree = expand_roots(f, depth).map_err(kernel)?;
    Ok((roots_text(&tree), tree.to_json()))
}

fn roots_text(tree: &ExpansionTree) -> String {
    let mut out = String::new();
    writeln!(out, "field: {}", tree.ctx.header()).unwrap();
    writeln!(out, "polynomial: {}", tree.f).unwrap();
    let leaves = tree.leaves();
    for (k, &id) in leaves.iter().enumerate() {
        let node = &tree.nodes[id];
        let series = if node.w.is_zero() { "0".to_string() } else { node.w.to_string() };
        writeln!(out, "branch {} [{}, multiplicity {}]: {series}", k + 1, node.status.name(), node.multiplicity)
            .unwrap();
        writeln!(out, "  residual valuation: {}", node.residual).unwrap();
        if let Status::Accumulating(acc) = &node.status {
            let j: Vec<String> = acc.j_star.iter().map(usize::to_string).collect();
            writeln!(out, "  accumulates at r = {} with J = {{{}}}", acc.r_star, j.join(", ")).unwrap();
            writeln!(out, "  limit equation: {} = 0 over {}", acc.equation_text(), acc.ctx.header()).unwrap();
            let sols: Vec<String> = acc
                .solutions
                .iter()
                .map(|(z, x)| if *x { format!("{} (expands)", acc.ctx.format(z)) } else { acc.ctx.format(z) })
                .collect();
            writeln!(out, "  solutions: {}", sols.join(", ")).unwrap();
            if acc.heuristic {
                writeln!(out, "  note: detected from a stable pair of lines; f is not additive").unwrap();
            }
        }
    }
    out
}

fn addpol_report(f: &Poly) -> Result<(String, Value), CliError> {
    let a = addpol(f).map_err(kernel)?;
    let coeffs: Vec<Value> =
        a.coeffs().iter().map(|(i, c)| json!({ "index": i, "coeff": c.to_string() })).collect();
    let json = json!({ "addpol": a.to_string(), "degree": a.degree(), "coefficients": coeffs });
    Ok((format!("{a}\n"), json))
}

fn intersections(f: &Poly) -> Result<(String, Value), CliError> {
    let a = addpol(f).map_err(kernel)?;
    let pts = intersection_points(&a);
    let mut text = format!("addpol: {a}\n");
    let mut items = Vec::new();
    for b in &pts {
        let j: Vec<String> = b.j.iter().map(usize::to_string).collect();
        writeln!(text, "r = {}  J = {{{}}}", b.r, j.join(", ")).unwrap();
        items.push(json!({ "r": b.r.to_string(), "j": b.j }));
    }
    if pts.is_empty() {
        text.push_str("no intersection points\n");
    }
    Ok((text, json!({ "addpol": a.to_string(), "points": items })))
}

fn maxexp_text(m: &MaxExp) -> String {
    match m.factorial() {
        Some(v) => format!("{}! = {v}", m.base),
        None => format!("{}!", m.base),
    }
}

fn bounds(f: &Poly, mode: MaxExpMode) -> Result<(String, Value), CliError> {
    let a = addpol(f).map_err(kernel)?;
    let n = f.degree().unwrap();
    let ram = maxram_of(&a);
    let paper = maxexp_of(n, &a, MaxExpMode::Paper);
    let sharp = maxexp_of(n, &a, MaxExpMode::Sharp);
    let order = order_type_bound_of(&a);
    let (name, chosen) = match mode {
        MaxExpMode::Paper => ("paper", &paper),
        MaxExpMode::Sharp => ("sharp", &sharp),
    };
    let text = format!(
        "maxram: {ram}\nmaxexp ({name}): {}\norder bound: {}\n",
        maxexp_text(chosen),
        order.label()
    );
    let json = json!({
        "maxram": big(&ram),
        "maxexp_mode": name,
        "maxexp": chosen.to_string(),
        "maxexp_sharp": sharp.to_string(),
        "maxexp_sharp_base": big(&sharp.base),
        "maxexp_paper": paper.to_string(),
        "maxexp_paper_base": big(&paper.base),
        "order_bound": order.label(),
        "order_bound_m": order.m,
    });
    Ok((text, json))
}

fn order_bound(f: &Poly) -> Result<(String, Value), CliError> {
    let order = order_type_bound_of(&addpol(f).map_err(kernel)?);
    let text = format!("{} ({} intersection points, at most {})\n", order.label(), order.m, order.cap);
    Ok((text, json!({ "order_bound": order.label(), "m": order.m, "cap": order.cap })))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cmd(verb: Verb, poly: &str) -> Command {
        Command {
            verb,
            p: 3,
            input: Input::Text(poly.into()),
            depth: 5,
            format: Format::Json,
            mode: MaxExpMode::Sharp,
        }
    }

    #[test]
    fn quadratic_reports() {
        let r = run(&cmd(Verb::Roots, "X^2-t")).unwrap();
        assert_eq!(r.json["schema"], SCHEMA);
        let branches = r.json["branches"].as_array().unwrap();
        assert_eq!(branches.len(), 2);
        for (b, c) in branches.iter().zip(["1", "2"]) {
            assert_eq!(b["status"], "exact_root");
            assert_eq!(b["terms"], json!([{ "exp": "1/2", "coeff": c }]));
        }
        assert_eq!(run(&cmd(Verb::Addpol, "X^2-t")).unwrap().text, "X^3 - t*X\n");
        let b = run(&cmd(Verb::Bounds, "X^2-t")).unwrap().json;
        assert_eq!((b["maxram"].clone(), b["order_bound"].clone()), (json!(2), json!("ω^2")));
        assert_eq!(b["maxexp_sharp"], "6");
        let i = run(&cmd(Verb::Intersections, "X^2-t")).unwrap().json;
        assert_eq!(i["points"], json!([{ "r": "1/2", "j": [0, 1] }, { "r": "infinity", "j": [0, 1] }]));
        assert_eq!(run(&cmd(Verb::OrderBound, "X^2-t")).unwrap().json["m"], 2);
    }

    #[test]
    fn errors_carry_kind_and_position() {
        let e = run(&cmd(Verb::Roots, "X^2 + y")).unwrap_err();
        assert_eq!(e.to_json()["error"], json!({ "kind": "parse", "message": "unknown symbol 'y' at column 7", "position": 6 }));
        let mut c = cmd(Verb::Roots, "X");
        c.p = 4;
        assert_eq!(run(&c).unwrap_err().kind(), "config");
        c.p = 3;
        c.depth = 0;
        assert_eq!(run(&c).unwrap_err().kind(), "config");
        assert_eq!(run(&cmd(Verb::Addpol, "t + 1")).unwrap_err().kind(), "config");
    }

    #[test]
    fn seeded_input_is_reproducible() {
        let mut c = cmd(Verb::Addpol, "");
        c.input = Input::Seed(9);
        assert_eq!(run(&c).unwrap().json, run(&c).unwrap().json);
    }
}
