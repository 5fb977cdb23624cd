//! Line-oriented tower scripts.
//!
//! ```text
//! base P3
//! blowup point
//! blowup curve genus=0 class= 1*HH - 1*L1
//! evidence cond2 not_unique=true
//! evidence cond3 mu=1 s= 1*H - 1*E1
//! ```

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::conditions::StepEvidence;
use crate::error::{Error, Result};
use crate::ring::{format_combination, Rational};
use crate::tower::{base_space, BaseKind, BlowupStep, Tower, Variety};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepSpec {
    Point,
    /// Center coefficients over the curve basis of the parent level.
    Curve { genus: u32, class: Vec<Rational> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvidenceSpec {
    Cond2 { not_unique: bool },
    /// `s` is over the divisor basis of the parent level.
    Cond3 { mu: u32, s: Vec<Rational> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptStep {
    pub spec: StepSpec,
    pub evidence: Vec<EvidenceSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerScript {
    pub base: BaseKind,
    pub steps: Vec<ScriptStep>,
}

/// Divisor and curve labels of the level reached after `steps`.
pub fn labels_after(base: BaseKind, steps: &[ScriptStep]) -> (Vec<String>, Vec<String>) {
    let v = base_space(base);
    let mut div = v.div_labels().to_vec();
    let mut cur = v.curve_labels().to_vec();
    let (mut p, mut c) = (0, 0);
    for s in steps {
        match s.spec {
            StepSpec::Point => {
                p += 1;
                div.push(format!("E{p}"));
                cur.push(format!("L{p}"));
            }
            StepSpec::Curve { .. } => {
                c += 1;
                div.push(format!("F{c}"));
                cur.push(format!("M{c}"));
            }
        }
    }
    (div, cur)
}

/// Parses `3/2`, `-4`, `7`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = n.parse::<num_bigint::BigInt>().ok()?;
    let d = d.parse::<num_bigint::BigInt>().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

enum ListError {
    Label(String),
    Malformed(String),
}

/// Parses `1*HH - 1*L2 + 3/2*M1` (whitespace already removed) over `labels`.
fn parse_combination(text: &str, labels: &[String]) -> std::result::Result<Vec<Rational>, ListError> {
    let mut out = vec![Rational::zero(); labels.len()];
    if text == "0" {
        return Ok(out);
    }
    if text.is_empty() {
        return Err(ListError::Malformed("empty coefficient list".into()));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 {
            terms.push(&text[start..i]);
            start = i;
        }
    }
    terms.push(&text[start..]);
    for term in terms {
        let (neg, body) = match term.as_bytes().first() {
            Some(b'-') => (true, &term[1..]),
            Some(b'+') => (false, &term[1..]),
            _ => (false, term),
        };
        let (coeff, label) = match body.split_once('*') {
            Some((c, l)) => (
                parse_rational(c).ok_or_else(|| ListError::Malformed(format!("malformed rational '{c}'")))?,
                l,
            ),
            None => (Rational::one(), body),
        };
        if label.is_empty() {
            return Err(ListError::Malformed(format!("missing basis element in term '{term}'")));
        }
        let idx = labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| ListError::Label(label.to_string()))?;
        if neg {
            out[idx] -= coeff;
        } else {
            out[idx] += coeff;
        }
    }
    Ok(out)
}

fn combination(text: &str, labels: &[String], line: usize, step: usize) -> Result<Vec<Rational>> {
    parse_combination(text, labels).map_err(|e| match e {
        ListError::Label(name) => Error::UnknownLabel { name, step },
        ListError::Malformed(m) => Error::parse(line, m),
    })
}

fn strip_key<'a>(s: &'a str, key: &str, line: usize) -> Result<&'a str> {
    s.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| Error::parse(line, format!("expected {key}=")))
}

/// Splits `12rest` into `(12, rest)`.
fn leading_uint<'a>(s: &'a str, what: &str, line: usize) -> Result<(u32, &'a str)> {
    let end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    let n = s[..end]
        .parse::<u32>()
        .map_err(|_| Error::parse(line, format!("malformed {what}")))?;
    Ok((n, &s[end..]))
}

pub fn parse_tower_file(text: &str) -> Result<TowerScript> {
    let mut base = None;
    let mut steps: Vec<ScriptStep> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let head = words.next().expect("nonempty");
        let kind = words.next().unwrap_or("");
        let rest: String = words.collect();

        if head == "base" {
            if base.is_some() {
                return Err(Error::parse(line, "duplicate base line"));
            }
            if !rest.is_empty() {
                return Err(Error::parse(line, "trailing text after base"));
            }
            base = Some(BaseKind::from_str(kind).map_err(|_| Error::parse(line, format!("unknown base space '{kind}'")))?);
            continue;
        }
        let Some(b) = base else {
            return Err(Error::parse(line, "script must start with a base line"));
        };
        let (div_labels, curve_labels) = labels_after(b, &steps);
        match (head, kind) {
            ("blowup", "point") => {
                if !rest.is_empty() {
                    return Err(Error::parse(line, "trailing text after blowup point"));
                }
                steps.push(ScriptStep {
                    spec: StepSpec::Point,
                    evidence: vec![],
                });
            }
            ("blowup", "curve") => {
                let step = steps.len() + 1;
                let r = strip_key(&rest, "genus", line)?;
                let (genus, r) = leading_uint(r, "genus", line)?;
                let r = strip_key(r, "class", line)?;
                let class = combination(r, &curve_labels, line, step)?;
                if class.iter().all(Zero::is_zero) {
                    return Err(Error::parse(line, "curve center must be nonzero"));
                }
                steps.push(ScriptStep {
                    spec: StepSpec::Curve { genus, class },
                    evidence: vec![],
                });
            }
            ("evidence", cond) => {
                let step = steps.len();
                if step == 0 {
                    return Err(Error::parse(line, "evidence before any blowup step"));
                }
                if steps[step - 1].spec == StepSpec::Point {
                    return Err(Error::parse(line, "evidence attached to a point blowup"));
                }
                let parent_labels = &div_labels[..div_labels.len() - 1];
                let ev = match cond {
                    "cond2" => {
                        let v = strip_key(&rest, "not_unique", line)?;
                        let not_unique = v
                            .parse::<bool>()
                            .map_err(|_| Error::parse(line, "not_unique must be true or false"))?;
                        EvidenceSpec::Cond2 { not_unique }
                    }
                    "cond3" => {
                        let r = strip_key(&rest, "mu", line)?;
                        let (mu, r) = leading_uint(r, "mu", line)?;
                        if mu == 0 {
                            return Err(Error::parse(line, "mu must be at least 1"));
                        }
                        let r = strip_key(r, "s", line)?;
                        let s = combination(r, parent_labels, line, step)?;
                        EvidenceSpec::Cond3 { mu, s }
                    }
                    other => return Err(Error::parse(line, format!("unknown evidence kind '{other}'"))),
                };
                steps[step - 1].evidence.push(ev);
            }
            _ => return Err(Error::parse(line, format!("unrecognized line '{content}'"))),
        }
    }
    let base = base.ok_or_else(|| Error::parse(text.lines().count().max(1), "missing base line"))?;
    Ok(TowerScript { base, steps })
}

impl fmt::Display for TowerScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "base {}", self.base)?;
        for (k, step) in self.steps.iter().enumerate() {
            let (div, cur) = labels_after(self.base, &self.steps[..k]);
            match &step.spec {
                StepSpec::Point => writeln!(f, "blowup point")?,
                StepSpec::Curve { genus, class } => {
                    writeln!(f, "blowup curve genus={genus} class= {}", format_combination(class, &cur))?
                }
            }
            for ev in &step.evidence {
                match ev {
                    EvidenceSpec::Cond2 { not_unique } => writeln!(f, "evidence cond2 not_unique={not_unique}")?,
                    EvidenceSpec::Cond3 { mu, s } => {
                        writeln!(f, "evidence cond3 mu={mu} s= {}", format_combination(s, &div))?
                    }
                }
            }
        }
        Ok(())
    }
}

/// Drops comments, blank lines and redundant whitespace, so that a
/// hand-written script in canonical form compares equal to its serialization.
pub fn normalize(text: &str) -> String {
    let mut out = String::new();
    for raw in text.lines() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        out.push_str(&content.split_whitespace().collect::<Vec<_>>().join(" "));
        out.push('\n');
    }
    out
}

impl TowerScript {
    pub fn build(&self) -> Result<Tower> {
        let mut t = Tower::new(self.base);
        for step in &self.steps {
            match &step.spec {
                StepSpec::Point => {
                    t.push_point();
                }
                StepSpec::Curve { genus, class } => {
                    let center = t.top().curve_class(class.clone())?;
                    t.push_curve(&center, *genus)?;
                }
            }
        }
        Ok(t)
    }

    /// Number of leading steps forming the general-position layer `X_1`:
    /// points, and curves whose classes involve no exceptional curve. A step
    /// carrying evidence ends the layer, so that it is judged on its
    /// conditions.
    pub fn initial_layer_len(&self) -> usize {
        let base_rank = base_space(self.base).rank();
        self.steps
            .iter()
            .take_while(|s| {
                s.evidence.is_empty()
                    && match &s.spec {
                        StepSpec::Point => true,
                        StepSpec::Curve { class, .. } => class[base_rank..].iter().all(Zero::is_zero),
                    }
            })
            .count()
    }

    /// Library step descriptor and evidence for step `k` (1-based), resolved
    /// on `parent = X_{k-1}`.
    pub fn resolve_step(&self, parent: &Variety, k: usize) -> Result<(BlowupStep, Vec<StepEvidence>)> {
        let step = &self.steps[k - 1];
        let blowup = match &step.spec {
            StepSpec::Point => BlowupStep::Point,
            StepSpec::Curve { genus, class } => BlowupStep::Curve {
                center: parent.curve_class(class.clone())?,
                genus: *genus,
            },
        };
        let evidence = step
            .evidence
            .iter()
            .map(|e| {
                Ok(match e {
                    EvidenceSpec::Cond2 { not_unique } => StepEvidence::Cond2 {
                        not_unique_in_class: Some(*not_unique),
                    },
                    EvidenceSpec::Cond3 { mu, s } => StepEvidence::Cond3 {
                        s_class: parent.div_class(s.clone())?,
                        mu: *mu,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((blowup, evidence))
    }
}
