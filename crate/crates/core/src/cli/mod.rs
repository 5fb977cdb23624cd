//! Command implementations behind the `towercalc` binary. Each command
//! returns its rendered output so it can be exercised without a process.

pub mod corpus;
pub mod expr;
pub mod script;

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde_json::{json, Value as Json};

use crate::conditions::{check_theorem1_step, check_theorem2_combined, CheckReport, Verdict};
use crate::error::{Error, Result};
use crate::eta::{x1_solve, x1_system, X1Config};
use crate::ring::{format_combination, rational_to_pq, Rational};
use crate::spectral::{degrees_report, AutAction, IntMatrix};
use crate::tower::{BaseKind, BlowupStep, Tower, Variety};

pub use expr::{eval_expr, Value};
pub use script::{parse_tower_file, TowerScript};

/// Process exit status of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success = 0,
    NeedsAssertion = 2,
    Failure = 3,
}

impl Outcome {
    pub fn code(self) -> i32 {
        self as i32
    }

    /// Any failing step outranks a missing assertion.
    pub fn of_reports(reports: &[CheckReport]) -> Self {
        if reports.iter().any(|r| r.verdict == Verdict::Fail) {
            Outcome::Failure
        } else if reports.iter().any(|r| r.verdict == Verdict::NeedsAssertion) {
            Outcome::NeedsAssertion
        } else {
            Outcome::Success
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Json {
    serde_json::to_value(v).expect("report types serialize")
}

fn render(j: &Json) -> String {
    let mut s = serde_json::to_string_pretty(j).expect("json values render");
    s.push('\n');
    s
}

fn level_at(tower: &Tower, level: Option<usize>) -> Result<&Variety> {
    match level {
        None => Ok(tower.top()),
        Some(k) => tower
            .level(k)
            .ok_or_else(|| Error::precondition(format!("level {k} out of range 0..={}", tower.steps()))),
    }
}

fn step_json(v: &Variety) -> Json {
    match v.step() {
        None => Json::Null,
        Some(BlowupStep::Point) => json!({"kind": "point"}),
        Some(BlowupStep::Curve { center, genus }) => {
            let labels = &v.curve_labels()[..v.rank() - 1];
            json!({
                "kind": "curve",
                "genus": genus,
                "class": format_combination(center.coeffs(), labels),
            })
        }
    }
}

fn step_text(v: &Variety) -> String {
    match step_json(v) {
        Json::Null => format!("base {}", v.base()),
        j if j["kind"] == "point" => "blowup point".into(),
        j => format!("blowup curve genus={} class= {}", j["genus"], j["class"].as_str().unwrap_or("")),
    }
}

pub fn cmd_build(script: &TowerScript, json_out: bool) -> Result<String> {
    let tower = script.build()?;
    let mut levels = Vec::new();
    let mut text = String::new();
    for (k, v) in tower.levels().iter().enumerate() {
        let n = v.rank();
        let (dl, cl) = (v.div_labels(), v.curve_labels());
        let t = v.tables();
        let c1c2 = v.pair_dc(v.c1(), v.c2())?;
        if json_out {
            let mut dd = serde_json::Map::new();
            let mut dc = serde_json::Map::new();
            for i in 0..n {
                for j in 0..n {
                    if i <= j {
                        dd.insert(format!("{}*{}", dl[i], dl[j]), Json::from(format_combination(&t.dd[i][j], cl)));
                    }
                    dc.insert(format!("{}.{}", dl[i], cl[j]), Json::from(rational_to_pq(&t.dc[i][j])));
                }
            }
            levels.push(json!({
                "level": k,
                "step": step_json(v),
                "divisors": dl,
                "curves": cl,
                "dd": dd,
                "dc": dc,
                "c1": v.format_div(v.c1()),
                "c2": v.format_curve(v.c2()),
                "c1_dot_c2": rational_to_pq(&c1c2),
            }));
        } else {
            let _ = writeln!(text, "X_{k}: {} (rank {n})", step_text(v));
            let _ = writeln!(text, "  divisors: {}", dl.join(" "));
            let _ = writeln!(text, "  curves:   {}", cl.join(" "));
            for i in 0..n {
                for j in i..n {
                    let prod = format_combination(&t.dd[i][j], cl);
                    if prod != "0" {
                        let _ = writeln!(text, "  {}*{} = {prod}", dl[i], dl[j]);
                    }
                }
            }
            for i in 0..n {
                for j in 0..n {
                    let x = &t.dc[i][j];
                    if *x != Rational::default() {
                        let _ = writeln!(text, "  {}.{} = {x}", dl[i], cl[j]);
                    }
                }
            }
            let _ = writeln!(text, "  c1 = {}", v.format_div(v.c1()));
            let _ = writeln!(text, "  c2 = {}", v.format_curve(v.c2()));
            let _ = writeln!(text, "  c1.c2 = {c1c2}");
        }
    }
    Ok(if json_out { render(&json!({ "levels": levels })) } else { text })
}

/// Per-step reports for check set 1 or 2.
pub fn check_script(script: &TowerScript, theorem: u8) -> Result<Vec<CheckReport>> {
    let tower = script.build()?;
    let layer = script.initial_layer_len();
    (1..=tower.steps())
        .map(|k| {
            let parent = &tower.levels()[k - 1];
            let (step, evidence) = script.resolve_step(parent, k)?;
            match theorem {
                1 => check_theorem1_step(parent, &step),
                2 => check_theorem2_combined(parent, &step, &evidence, k <= layer),
                t => Err(Error::precondition(format!("unknown check set {t}; expected 1 or 2"))),
            }
        })
        .collect()
}

pub fn cmd_check(script: &TowerScript, theorem: u8, json_out: bool) -> Result<(String, Outcome)> {
    let reports = check_script(script, theorem)?;
    let outcome = Outcome::of_reports(&reports);
    let overall = match outcome {
        Outcome::Success => Verdict::Pass,
        Outcome::NeedsAssertion => Verdict::NeedsAssertion,
        Outcome::Failure => Verdict::Fail,
    };
    if json_out {
        let j = json!({
            "theorem": theorem,
            "steps": to_json(&reports),
            "verdict": to_json(&overall),
        });
        return Ok((render(&j), outcome));
    }
    let mut text = String::new();
    for r in &reports {
        let nums: Vec<String> = r.numbers.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(
            text,
            "X_{}: {} ({}) {}",
            r.step_index,
            r.verdict,
            r.matched_condition,
            nums.join(" ")
        );
        if !r.notes.is_empty() {
            let _ = writeln!(text, "    {}", r.notes);
        }
    }
    let _ = writeln!(text, "check {theorem}: {overall}");
    Ok((text, outcome))
}

/// Reads an `X_1`-shaped script: base `P3`, points, and curves `d*HH`.
pub fn x1_config(script: &TowerScript) -> Result<X1Config> {
    if script.base != BaseKind::P3 {
        return Err(Error::precondition("eta requires base P3"));
    }
    if script.initial_layer_len() != script.steps.len() {
        return Err(Error::precondition("eta requires a single general-position layer"));
    }
    let mut points = 0;
    let mut curves = Vec::new();
    for step in &script.steps {
        match &step.spec {
            script::StepSpec::Point => points += 1,
            script::StepSpec::Curve { genus, class } => {
                let d = &class[0];
                let deg = (d.is_integer() && *d > Rational::default())
                    .then(|| d.to_integer())
                    .and_then(|d| u32::try_from(d).ok())
                    .ok_or_else(|| Error::precondition("curve classes must be positive integer multiples of HH"))?;
                curves.push((deg, *genus));
            }
        }
    }
    X1Config::new(points, curves)
}

pub fn cmd_eta(script: &TowerScript, json_out: bool) -> Result<String> {
    let cfg = x1_config(script)?;
    let system = x1_system(&cfg);
    let rays = x1_solve(&cfg)?;
    let tower = script.build()?;
    let top = tower.top();
    let classes: Vec<String> = rays
        .iter()
        .map(|r| r.to_class(top).map(|c| top.format_div(&c)))
        .collect::<Result<_>>()?;
    if json_out {
        let rays_json: Vec<Json> = rays
            .iter()
            .zip(&classes)
            .map(|(r, c)| {
                let mut j = to_json(r);
                j["class"] = Json::from(c.as_str());
                j
            })
            .collect();
        return Ok(render(&json!({ "system": to_json(&system), "rays": rays_json })));
    }
    let mut text = String::new();
    let _ = writeln!(text, "eta = a*H - sum e_i*E_i - sum f_j*F_j; eta.eta = 0 iff");
    for e in &system.equations {
        let _ = writeln!(text, "  {e}");
    }
    if rays.is_empty() {
        let _ = writeln!(text, "no nonzero solutions");
    }
    for (r, c) in rays.iter().zip(&classes) {
        let support: Vec<String> = r.support.iter().map(|j| format!("F{}", j + 1)).collect();
        let _ = writeln!(
            text,
            "ray {c}  support {{{}}}{}",
            support.join(", "),
            if r.nonnegative { "" } else { "  (negative coefficient)" }
        );
    }
    Ok(text)
}

pub fn cmd_eval(script: &TowerScript, expr: &str, level: Option<usize>) -> Result<String> {
    let tower = script.build()?;
    let v = level_at(&tower, level)?;
    let value = eval_expr(v, expr)?;
    Ok(format!("{}\n", value.display(v)))
}

/// One row per line, whitespace-separated integers; `#` comments allowed.
pub fn parse_matrix(text: &str) -> Result<IntMatrix> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let row = content
            .split_whitespace()
            .map(|w| w.parse::<BigInt>().map_err(|_| Error::parse(i + 1, format!("malformed integer '{w}'"))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    IntMatrix::new(rows).map_err(|_| Error::ShapeMismatch("matrix file is not square".into()))
}

pub struct SpectralArgs<'a> {
    pub m11: &'a str,
    pub m22: &'a str,
    pub inv_m11: Option<&'a str>,
    pub tol: f64,
    pub level: Option<usize>,
}

pub fn cmd_spectral(script: &TowerScript, args: &SpectralArgs, json_out: bool) -> Result<String> {
    let tower = script.build()?;
    let v = level_at(&tower, args.level)?;
    let act = AutAction::new(parse_matrix(args.m11)?, parse_matrix(args.m22)?)?;
    let inv = args.inv_m11.map(parse_matrix).transpose()?;
    let r = degrees_report(v, &act, args.tol, inv.as_ref())?;
    if json_out {
        return Ok(render(&to_json(&r)));
    }
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut text = String::new();
    let _ = writeln!(text, "char poly (H11): {}", r.char_poly_11);
    let _ = writeln!(text, "char poly (H22): {}", r.char_poly_22);
    let _ = writeln!(text, "det: {} / {}  unimodular: {} / {}", r.det_11, r.det_22, yes(r.unimodular_11), yes(r.unimodular_22));
    let _ = writeln!(text, "rational eigenvalues (H11): [{}]", r.rational_roots_11.join(", "));
    let _ = writeln!(text, "lambda1 = {:.12} (+- {:.1e})", r.lambda1, r.lambda1_error);
    let _ = writeln!(text, "lambda2 = {:.12} (+- {:.1e})", r.lambda2, r.lambda2_error);
    match r.h_top {
        Some(h) => {
            let _ = writeln!(text, "h_top = {h:.12}");
        }
        None => {
            let _ = writeln!(text, "h_top: rejected (not unimodular)");
        }
    }
    let _ = writeln!(text, "lambda1 = lambda2: {}", yes(r.degrees_equal));
    if let Some(c) = &r.irrationality_certificate {
        let _ = writeln!(text, "{c}");
    }
    let _ = writeln!(
        text,
        "cubic form preserved: {}  c1 fixed: {}  multiplicative: {}",
        yes(r.preserves_cubic_form),
        yes(r.fixes_c1),
        yes(r.multiplicative)
    );
    if let Some(lc) = r.log_concave {
        let _ = writeln!(text, "lambda1 <= lambda2^2: {}", yes(lc));
    }
    if let Some(inv) = &r.inverse {
        let _ = writeln!(
            text,
            "inverse: {}  lambda1(inverse) = {:.12}  equals lambda2: {}",
            yes(inv.is_inverse),
            inv.lambda1_of_inverse,
            yes(inv.matches_lambda2)
        );
    }
    for n in &r.notes {
        let _ = writeln!(text, "note: {n}");
    }
    Ok(text)
}

pub fn cmd_examples(json_out: bool) -> Result<(String, Outcome)> {
    let rows = corpus::run_examples()?;
    let outcome = if rows.iter().all(|r| r.pass) {
        Outcome::Success
    } else {
        Outcome::Failure
    };
    if json_out {
        return Ok((render(&to_json(&rows)), outcome));
    }
    let w = rows.iter().map(|r| r.quantity.len()).max().unwrap_or(0);
    let mut text = String::new();
    for r in &rows {
        let _ = writeln!(
            text,
            "{:<16} {:<w$}  expected {:>4}  got {:>4}  {}",
            r.example,
            r.quantity,
            r.expected,
            r.actual,
            if r.pass { "PASS" } else { "FAIL" },
        );
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    let _ = writeln!(text, "{passed}/{} passed", rows.len());
    Ok((text, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn script(name: &str) -> TowerScript {
        parse_tower_file(corpus::corpus_entry(name).unwrap().text).unwrap()
    }

    #[test]
    fn two_lines_gamma_via_eval() {
        let s = script("two_lines");
        let out = cmd_eval(&s, "c1 * (1*HH - 1*L1 - 1*M1)", Some(3)).unwrap();
        assert_eq!(out, "1\n");
        let out = cmd_eval(&s, "c1 * (1*HH - 1*L1 - 1*M1) + 2*0 - 2", Some(3)).unwrap();
        assert_eq!(out, "-1\n");
        assert!(cmd_eval(&s, "H", Some(9)).is_err());
    }

    #[test]
    fn outcomes() {
        let (_, o) = cmd_check(&script("tetrahedron"), 1, false).unwrap();
        assert_eq!(o, Outcome::Success);
        let (_, o) = cmd_check(&script("tetrahedron"), 2, false).unwrap();
        assert_eq!(o, Outcome::Failure);
        let (_, o) = cmd_check(&script("two_lines"), 2, false).unwrap();
        assert_eq!(o, Outcome::Failure);
        let s = parse_tower_file("base P3\nblowup point\nblowup point\nblowup curve genus=0 class= 1*HH - 1*L1 - 1*L2\nevidence cond3 mu=1 s= 1*H\n").unwrap();
        let (_, o) = cmd_check(&s, 2, false).unwrap();
        assert_eq!(o, Outcome::NeedsAssertion);
        assert!(cmd_check(&s, 3, false).is_err());
    }

    #[test]
    fn check_json_shape() {
        let (out, _) = cmd_check(&script("tetrahedron"), 1, true).unwrap();
        let j: Json = serde_json::from_str(&out).unwrap();
        assert_eq!(j["steps"][4]["level"], 5);
        assert_eq!(j["steps"][4]["numbers"]["gamma"], "-2/1");
        assert_eq!(j["verdict"], "Pass");
    }

    #[test]
    fn eta_requires_x1() {
        assert!(cmd_eta(&script("two_lines"), false).is_err());
        let s = parse_tower_file("base P3\nblowup point\nblowup curve genus=0 class= 1*HH\nblowup curve genus=0 class= 1*HH\n").unwrap();
        let out = cmd_eta(&s, false).unwrap();
        assert!(out.contains("ray 1*H - 1*F1  support {F1}"), "{out}");
        assert!(out.contains("ray 1*H - 1*F2  support {F2}"), "{out}");
    }

    #[test]
    fn matrices() {
        let m = parse_matrix("2 1\n# c\n1 1\n\n").unwrap();
        assert_eq!(m.size(), 2);
        assert!(parse_matrix("1 2\n3\n").is_err());
        assert!(parse_matrix("1 x\n3 4\n").is_err());
    }

    #[test]
    fn build_text_has_invariant() {
        let out = cmd_build(&script("conic_cubic"), false).unwrap();
        assert_eq!(out.matches("c1.c2 = 24").count(), 3);
        let out = cmd_build(&script("conic_cubic"), true).unwrap();
        let j: Json = serde_json::from_str(&out).unwrap();
        assert_eq!(j["levels"][2]["c1_dot_c2"], "24/1");
        assert_eq!(j["levels"][1]["step"]["class"], "2*HH");
    }
}
