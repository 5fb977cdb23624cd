//! Bundled example towers and the numbers they must reproduce.

use serde::Serialize;

use crate::conditions::{check_condition3, check_theorem1_step, CheckReport, MatchedCondition, Verdict};
use crate::error::Result;
use crate::ring::{int, Rational};
use crate::tower::{gamma, BlowupStep, Tower};

use super::check_script;
use super::script::{parse_tower_file, TowerScript};

pub struct CorpusEntry {
    pub name: &'static str,
    pub title: &'static str,
    pub text: &'static str,
}

pub const CORPUS: &[CorpusEntry] = &[
    CorpusEntry {
        name: "plane_cubic",
        title: "plane cubic through 2 points",
        text: include_str!("../../corpus/plane_cubic.tower"),
    },
    CorpusEntry {
        name: "conic_cubic",
        title: "conic and cubic in one plane",
        text: include_str!("../../corpus/conic_cubic.tower"),
    },
    CorpusEntry {
        name: "tetrahedron",
        title: "4 points and 6 lines",
        text: include_str!("../../corpus/tetrahedron.tower"),
    },
    CorpusEntry {
        name: "two_lines",
        title: "2 points and 2 lines",
        text: include_str!("../../corpus/two_lines.tower"),
    },
    CorpusEntry {
        name: "p2p1_vertical",
        title: "P2xP1, vertical line",
        text: include_str!("../../corpus/p2p1_vertical.tower"),
    },
    CorpusEntry {
        name: "p2p1_horizontal",
        title: "P2xP1, horizontal cubic",
        text: include_str!("../../corpus/p2p1_horizontal.tower"),
    },
    CorpusEntry {
        name: "p2p1_product",
        title: "S x P1",
        text: include_str!("../../corpus/p2p1_product.tower"),
    },
];

pub fn corpus_entry(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleRow {
    pub example: String,
    pub quantity: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

struct Rows<'a> {
    example: &'a str,
    rows: Vec<ExampleRow>,
}

impl Rows<'_> {
    fn push(&mut self, quantity: impl Into<String>, expected: impl ToString, actual: impl ToString) {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        self.rows.push(ExampleRow {
            example: self.example.to_string(),
            quantity: quantity.into(),
            pass: expected == actual,
            expected,
            actual,
        });
    }

    fn num(&mut self, quantity: impl Into<String>, expected: i64, actual: Option<&Rational>) {
        let actual = actual.map_or_else(|| "missing".to_string(), ToString::to_string);
        self.push(quantity, int(expected), actual);
    }
}

fn load(entry: &CorpusEntry) -> Result<(TowerScript, Tower)> {
    let script = parse_tower_file(entry.text)?;
    let tower = script.build()?;
    Ok((script, tower))
}

fn step_gamma(script: &TowerScript, tower: &Tower, k: usize) -> Result<Rational> {
    let parent = &tower.levels()[k - 1];
    match script.resolve_step(parent, k)?.0 {
        BlowupStep::Curve { center, genus } => gamma(parent, &center, genus),
        BlowupStep::Point => Ok(Rational::default()),
    }
}

fn theorem1(script: &TowerScript, tower: &Tower, k: usize) -> Result<CheckReport> {
    let parent = &tower.levels()[k - 1];
    let (step, _) = script.resolve_step(parent, k)?;
    check_theorem1_step(parent, &step)
}

fn cond3(script: &TowerScript, tower: &Tower, k: usize) -> Result<CheckReport> {
    let parent = &tower.levels()[k - 1];
    let (step, evidence) = script.resolve_step(parent, k)?;
    let BlowupStep::Curve { center, genus } = step else {
        unreachable!("corpus condition 3 steps are curves")
    };
    let (s, mu) = evidence
        .iter()
        .find_map(|e| match e {
            crate::conditions::StepEvidence::Cond3 { s_class, mu } => Some((s_class.clone(), *mu)),
            _ => None,
        })
        .expect("corpus step carries condition 3 evidence");
    check_condition3(parent, &center, genus, &s, mu)
}

fn verdict_at(reports: &[CheckReport], k: usize) -> (Verdict, MatchedCondition) {
    let r = &reports[k - 1];
    (r.verdict, r.matched_condition)
}

fn plane_cubic(r: &mut Rows) -> Result<()> {
    // d = 3, t = 2, g = 1
    let (s, t) = load(corpus_entry("plane_cubic").expect("bundled"))?;
    let c = cond3(&s, &t, 3)?;
    r.num("kappa = d - t", 1, c.number("kappa"));
    r.num("gamma = 4d - 2t + (d-1)(d-2) - 2", 8, c.number("gamma"));
    r.push("condition 3", Verdict::Pass, c.verdict);
    let reports = check_script(&s, 2)?;
    r.push("check 2 at X_3", "Pass/Cond3", fmt_pair(verdict_at(&reports, 3)));
    Ok(())
}

fn fmt_pair((v, m): (Verdict, MatchedCondition)) -> String {
    format!("{v}/{m}")
}

fn conic_cubic(r: &mut Rows) -> Result<()> {
    // d1 = 2, d2 = 3, g = 1
    let (s, t) = load(corpus_entry("conic_cubic").expect("bundled"))?;
    let c = cond3(&s, &t, 2)?;
    r.num("gamma = 4d2 - d1d2 + 2g - 2", 6, c.number("gamma"));
    r.num("kappa = d2 - d1d2", -3, c.number("kappa"));
    let diff = c.number("mu_gamma").cloned().unwrap_or_default() - c.number("two_kappa").cloned().unwrap_or_default();
    r.num("mu*gamma - 2kappa = 2d2 + d1d2 + 2g - 2", 12, Some(&diff));
    let reports = check_script(&s, 2)?;
    r.push("check 2 at X_1", "Pass/None", fmt_pair(verdict_at(&reports, 1)));
    r.push("check 2 at X_2", "Pass/Cond3", fmt_pair(verdict_at(&reports, 2)));
    Ok(())
}

fn tetrahedron(r: &mut Rows) -> Result<()> {
    let (s, t) = load(corpus_entry("tetrahedron").expect("bundled"))?;
    for k in 5..=10 {
        let c = theorem1(&s, &t, k)?;
        r.num(format!("gamma at X_{k}"), -2, c.number("gamma"));
        r.num(format!("c1.C at X_{k}"), 0, c.number("c1_dot_C"));
        r.push(format!("check 1 at X_{k}"), Verdict::Pass, c.verdict);
    }
    let reports = check_script(&s, 2)?;
    r.push("check 2 at X_5 (unique in class)", Verdict::Fail, reports[4].verdict);
    Ok(())
}

fn two_lines(r: &mut Rows) -> Result<()> {
    let (s, t) = load(corpus_entry("two_lines").expect("bundled"))?;
    let reports = check_script(&s, 2)?;
    r.num("gamma of first line on Y", 0, Some(&step_gamma(&s, &t, 3)?));
    r.push("check 2 at X_3", "Fail/None", fmt_pair(verdict_at(&reports, 3)));
    let c = cond3(&s, &t, 4)?;
    r.num("c1(Z).C", 1, c.number("c1_dot_C"));
    r.num("gamma of second line on Z", -1, c.number("gamma"));
    r.num("kappa", -1, c.number("kappa"));
    r.num("2kappa", -2, c.number("two_kappa"));
    r.num("mu*gamma", -1, c.number("mu_gamma"));
    r.push("condition 3", Verdict::Pass, c.verdict);
    r.push("check 2 at X_4", "Pass/Cond2", fmt_pair(verdict_at(&reports, 4)));
    Ok(())
}

fn vertical(r: &mut Rows) -> Result<()> {
    let (s, t) = load(corpus_entry("p2p1_vertical").expect("bundled"))?;
    let c = cond3(&s, &t, 3)?;
    r.num("gamma", 0, c.number("gamma"));
    r.num("kappa", 0, c.number("kappa"));
    r.push("condition 3", Verdict::Fail, c.verdict);
    let reports = check_script(&s, 2)?;
    r.push("check 2 at X_3", "Fail/None", fmt_pair(verdict_at(&reports, 3)));
    Ok(())
}

fn horizontal(r: &mut Rows) -> Result<()> {
    // d = 3, g = 1
    let (s, t) = load(corpus_entry("p2p1_horizontal").expect("bundled"))?;
    let c = cond3(&s, &t, 2)?;
    r.num("gamma = 3d + 2g - 2", 9, c.number("gamma"));
    r.num("2kappa", 0, c.number("two_kappa"));
    r.push("condition 3", Verdict::Pass, c.verdict);
    let reports = check_script(&s, 2)?;
    r.push("check 2 at X_2", "Pass/Cond3", fmt_pair(verdict_at(&reports, 2)));
    Ok(())
}

fn product(r: &mut Rows) -> Result<()> {
    let (s, t) = load(corpus_entry("p2p1_product").expect("bundled"))?;
    for k in 1..=3 {
        let c = theorem1(&s, &t, k)?;
        r.num(format!("c1.C at X_{k}"), 2, c.number("c1_dot_C"));
        r.num(format!("2g-2 at X_{k}"), -2, c.number("two_g_minus_2"));
        r.push(format!("check 1 at X_{k}"), Verdict::Pass, c.verdict);
    }
    Ok(())
}

type Runner = fn(&mut Rows) -> Result<()>;

/// Builds every bundled tower and compares the quantities it is meant to
/// reproduce.
pub fn run_examples() -> Result<Vec<ExampleRow>> {
    let runners: [(&str, Runner); 7] = [
        ("plane_cubic", plane_cubic),
        ("conic_cubic", conic_cubic),
        ("tetrahedron", tetrahedron),
        ("two_lines", two_lines),
        ("p2p1_vertical", vertical),
        ("p2p1_horizontal", horizontal),
        ("p2p1_product", product),
    ];
    let mut out = Vec::new();
    for (name, run) in runners {
        let mut rows = Rows {
            example: name,
            rows: Vec::new(),
        };
        run(&mut rows)?;
        out.extend(rows.rows);
    }
    Ok(out)
}
