//! Tower levels: the three base 3-folds and the point/curve blowup steps.
//!
//! A blowup appends one divisor (`E` or `F`) and one curve (`L` or `M`) to
//! the parent's bases. Parent classes embed by zero-padding (pullback) and
//! exceptional slots are dropped on the way down (pushforward).

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{int, CurveClass, DivisorClass, GradedClass, IntersectionRing, IntersectionTables, Rational, VarietyId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BaseKind {
    P3,
    P2xP1,
    P1x3,
}

impl BaseKind {
    pub fn name(self) -> &'static str {
        match self {
            BaseKind::P3 => "P3",
            BaseKind::P2xP1 => "P2xP1",
            BaseKind::P1x3 => "P1x3",
        }
    }
}

impl fmt::Display for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P3" => Ok(BaseKind::P3),
            "P2xP1" => Ok(BaseKind::P2xP1),
            "P1x3" | "P1xP1xP1" => Ok(BaseKind::P1x3),
            other => Err(Error::precondition(format!("unknown base space {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlowupStep {
    Point,
    /// Center given as a class on the parent; the tool does not check that a
    /// smooth curve of this class and genus exists.
    Curve { center: CurveClass, genus: u32 },
}

impl BlowupStep {
    pub fn is_point(&self) -> bool {
        matches!(self, BlowupStep::Point)
    }
}

/// One level of a tower.
#[derive(Clone, Debug)]
pub struct Variety {
    ring: IntersectionRing,
    c1: DivisorClass,
    c2: CurveClass,
    parent: Option<VarietyId>,
    step: Option<BlowupStep>,
    base: BaseKind,
    points: usize,
    curves: usize,
}

impl Deref for Variety {
    type Target = IntersectionRing;

    fn deref(&self) -> &IntersectionRing {
        &self.ring
    }
}

impl Variety {
    pub fn ring(&self) -> &IntersectionRing {
        &self.ring
    }

    pub fn c1(&self) -> &DivisorClass {
        &self.c1
    }

    pub fn c2(&self) -> &CurveClass {
        &self.c2
    }

    pub fn parent(&self) -> Option<VarietyId> {
        self.parent
    }

    pub fn step(&self) -> Option<&BlowupStep> {
        self.step.as_ref()
    }

    pub fn base(&self) -> BaseKind {
        self.base
    }

    /// Number of point blowups below and including this level.
    pub fn point_count(&self) -> usize {
        self.points
    }

    /// Number of curve blowups below and including this level.
    pub fn curve_count(&self) -> usize {
        self.curves
    }

    /// Rank of the base space's own basis (the leading slots of every level).
    pub fn base_rank(&self) -> usize {
        self.rank() - self.points - self.curves
    }

    /// Labels `(divisor, curve)` the next blowup of the given kind will add.
    pub fn next_labels(&self, point: bool) -> (String, String) {
        if point {
            (format!("E{}", self.points + 1), format!("L{}", self.points + 1))
        } else {
            (format!("F{}", self.curves + 1), format!("M{}", self.curves + 1))
        }
    }
}

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn build_base(kind: BaseKind, div: Vec<String>, curve: Vec<String>, tables: IntersectionTables, c1: &[i64], c2: &[i64]) -> Variety {
    let ring = IntersectionRing::new(div, curve, tables).expect("base tables are well-formed");
    let c1 = ring.div_from_ints(c1).expect("rank matches");
    let c2 = ring.curve_from_ints(c2).expect("rank matches");
    Variety {
        ring,
        c1,
        c2,
        parent: None,
        step: None,
        base: kind,
        points: 0,
        curves: 0,
    }
}

pub fn base_space(kind: BaseKind) -> Variety {
    match kind {
        BaseKind::P3 => {
            let mut t = IntersectionTables::zeros(1);
            t.dd[0][0][0] = int(1);
            t.dc[0][0] = int(1);
            build_base(kind, labels(&["H"]), labels(&["HH"]), t, &[4], &[6])
        }
        BaseKind::P2xP1 => {
            // A = P2 x pt, B = P1 x P1; l = P1 x pt, m = pt x P1.
            let mut t = IntersectionTables::zeros(2);
            t.dd[0][1][0] = int(1);
            t.dd[1][0][0] = int(1);
            t.dd[1][1][1] = int(1);
            t.dc[0][1] = int(1);
            t.dc[1][0] = int(1);
            build_base(kind, labels(&["A", "B"]), labels(&["l", "m"]), t, &[2, 3], &[6, 3])
        }
        BaseKind::P1x3 => {
            // D_i . D_j = C_k for {i, j, k} = {1, 2, 3}; D_i . C_j = delta_ij.
            let mut t = IntersectionTables::zeros(3);
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        t.dd[i][j][3 - i - j] = int(1);
                    }
                }
                t.dc[i][i] = int(1);
            }
            build_base(kind, labels(&["D1", "D2", "D3"]), labels(&["C1", "C2", "C3"]), t, &[2, 2, 2], &[4, 4, 4])
        }
    }
}

fn padded(v: &[Rational], last: Rational) -> Vec<Rational> {
    let mut out = v.to_vec();
    out.push(last);
    out
}

/// Tables of the child with every product of pulled-back classes inherited
/// and all entries in the new row/column zero.
fn inherited_tables(parent: &IntersectionRing) -> IntersectionTables {
    let n = parent.rank();
    let mut t = IntersectionTables::zeros(n + 1);
    let pt = parent.tables();
    for i in 0..n {
        for j in 0..n {
            t.dd[i][j] = padded(&pt.dd[i][j], Rational::zero());
        }
        for k in 0..n {
            t.dc[i][k] = pt.dc[i][k].clone();
        }
    }
    t.dc[n][n] = int(-1);
    t
}

fn child(parent: &Variety, tables: IntersectionTables, point: bool) -> Result<IntersectionRing> {
    let (d, c) = parent.next_labels(point);
    let mut div = parent.div_labels().to_vec();
    let mut curve = parent.curve_labels().to_vec();
    div.push(d);
    curve.push(c);
    IntersectionRing::new(div, curve, tables)
}

fn embed<C: GradedClass>(ring: &IntersectionRing, x: &C, last: Rational) -> Vec<Rational> {
    debug_assert_eq!(x.coeffs().len() + 1, ring.rank());
    padded(x.coeffs(), last)
}

pub fn blowup_point(parent: &Variety) -> Variety {
    let n = parent.rank();
    let mut tables = inherited_tables(parent);
    tables.dd[n][n][n] = int(-1);
    let ring = child(parent, tables, true).expect("point blowup tables are well-formed");
    let c1 = ring.div_class(embed(&ring, &parent.c1, int(-2))).expect("rank");
    let c2 = ring.curve_class(embed(&ring, &parent.c2, Rational::zero())).expect("rank");
    Variety {
        ring,
        c1,
        c2,
        parent: Some(parent.id()),
        step: Some(BlowupStep::Point),
        base: parent.base,
        points: parent.points + 1,
        curves: parent.curves,
    }
}

/// `c1(parent) . C + 2g - 2`, the degree of the normal bundle of the center.
pub fn gamma(parent: &Variety, center: &CurveClass, genus: u32) -> Result<Rational> {
    let c1_dot = parent.pair_dc(&parent.c1, center)?;
    Ok(c1_dot + int(2 * i64::from(genus) - 2))
}

pub fn blowup_curve(parent: &Variety, center: &CurveClass, genus: u32) -> Result<Variety> {
    if center.variety() != parent.id() {
        return Err(Error::BasisMismatch);
    }
    if center.is_zero() {
        return Err(Error::precondition("curve center class must be nonzero"));
    }
    let n = parent.rank();
    let g = gamma(parent, center, genus)?;
    let mut tables = inherited_tables(parent);
    for i in 0..n {
        // pi^*D_i . F = (D_i . C) M
        let d_dot_c = parent.pair_dc(&parent.div_basis(i), center)?;
        tables.dd[i][n][n] = d_dot_c.clone();
        tables.dd[n][i][n] = d_dot_c;
    }
    // F . F = -pi^*C + gamma M
    let mut ff: Vec<Rational> = center.coeffs().iter().map(|c| -c).collect();
    ff.push(g);
    tables.dd[n][n] = ff;
    let ring = child(parent, tables, false)?;

    let c1 = ring.div_class(embed(&ring, &parent.c1, int(-1)))?;
    let c1_dot_c = parent.pair_dc(&parent.c1, center)?;
    let c2_plus_c = parent.c2.add(center)?;
    let c2 = ring.curve_class(embed(&ring, &c2_plus_c, -c1_dot_c))?;
    Ok(Variety {
        ring,
        c1,
        c2,
        parent: Some(parent.id()),
        step: Some(BlowupStep::Curve {
            center: center.clone(),
            genus,
        }),
        base: parent.base,
        points: parent.points,
        curves: parent.curves + 1,
    })
}

fn check_parent<C: GradedClass>(child: &Variety, x: &C) -> Result<()> {
    if child.parent != Some(x.variety()) || x.coeffs().len() + 1 != child.rank() {
        return Err(Error::BasisMismatch);
    }
    Ok(())
}

fn check_own<C: GradedClass>(child: &Variety, x: &C) -> Result<()> {
    if child.parent.is_none() || x.variety() != child.id() || x.coeffs().len() != child.rank() {
        return Err(Error::BasisMismatch);
    }
    Ok(())
}

pub fn pullback_div(child: &Variety, x: &DivisorClass) -> Result<DivisorClass> {
    check_parent(child, x)?;
    child.div_class(embed(child, x, Rational::zero()))
}

pub fn pullback_curve(child: &Variety, c: &CurveClass) -> Result<CurveClass> {
    check_parent(child, c)?;
    child.curve_class(embed(child, c, Rational::zero()))
}

fn drop_last<C: GradedClass>(parent: VarietyId, x: &C) -> C {
    let mut v = x.coeffs().to_vec();
    v.pop();
    C::from_parts(parent, v)
}

pub fn pushforward_div(child: &Variety, x: &DivisorClass) -> Result<DivisorClass> {
    check_own(child, x)?;
    Ok(drop_last(child.parent.expect("checked"), x))
}

pub fn pushforward_curve(child: &Variety, c: &CurveClass) -> Result<CurveClass> {
    check_own(child, c)?;
    Ok(drop_last(child.parent.expect("checked"), c))
}

/// Class `pi^*S - mu F` of the strict transform of a hypersurface `S`
/// containing the center with multiplicity `mu`.
pub fn strict_transform_hypersurface(child: &Variety, s: &DivisorClass, mu: u32) -> Result<DivisorClass> {
    if !matches!(child.step, Some(BlowupStep::Curve { .. })) {
        return Err(Error::NotCurveBlowup);
    }
    if mu < 1 {
        return Err(Error::precondition("multiplicity mu must be at least 1"));
    }
    check_parent(child, s)?;
    child.div_class(embed(child, s, -int(i64::from(mu))))
}

pub fn chern(v: &Variety) -> (DivisorClass, CurveClass) {
    (v.c1.clone(), v.c2.clone())
}

/// The exceptional divisor added by the last step, if any.
pub fn exceptional_divisor(v: &Variety) -> Option<DivisorClass> {
    v.parent.map(|_| v.div_basis(v.rank() - 1))
}

/// The exceptional curve (`L` or `M`) added by the last step, if any.
pub fn exceptional_curve(v: &Variety) -> Option<CurveClass> {
    v.parent.map(|_| v.curve_basis(v.rank() - 1))
}

/// Append-only chain of levels `X_0 <- X_1 <- ... <- X_n`.
#[derive(Clone, Debug)]
pub struct Tower {
    levels: Vec<Variety>,
}

impl Tower {
    pub fn new(base: BaseKind) -> Self {
        Tower {
            levels: vec![base_space(base)],
        }
    }

    pub fn base(&self) -> BaseKind {
        self.levels[0].base
    }

    pub fn levels(&self) -> &[Variety] {
        &self.levels
    }

    pub fn level(&self, k: usize) -> Option<&Variety> {
        self.levels.get(k)
    }

    pub fn top(&self) -> &Variety {
        self.levels.last().expect("a tower always has its base")
    }

    /// Number of blowup steps (the top level is `X_n`).
    pub fn steps(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn push_point(&mut self) -> &Variety {
        let next = blowup_point(self.top());
        self.levels.push(next);
        self.top()
    }

    pub fn push_curve(&mut self, center: &CurveClass, genus: u32) -> Result<&Variety> {
        let next = blowup_curve(self.top(), center, genus)?;
        self.levels.push(next);
        Ok(self.top())
    }

    /// Pulls a divisor class from level `from` up to level `to >= from`.
    pub fn lift_div(&self, x: &DivisorClass, to: usize) -> Result<DivisorClass> {
        let from = self.index_of(x.variety()).ok_or(Error::BasisMismatch)?;
        if to < from || to >= self.levels.len() {
            return Err(Error::BasisMismatch);
        }
        let mut cur = x.clone();
        for k in from + 1..=to {
            cur = pullback_div(&self.levels[k], &cur)?;
        }
        Ok(cur)
    }

    pub fn index_of(&self, id: VarietyId) -> Option<usize> {
        self.levels.iter().position(|v| v.id() == id)
    }
}

/// `true` if the class has zero coefficients on every exceptional curve,
/// i.e. it is pulled back from the base space.
pub fn is_base_class(v: &Variety, c: &CurveClass) -> bool {
    c.coeffs()[v.base_rank()..].iter().all(Zero::is_zero)
}

/// Degree of a base-supported curve class on P3 (its `HH` coefficient).
pub fn p3_degree(v: &Variety, c: &CurveClass) -> Option<Rational> {
    (v.base() == BaseKind::P3).then(|| c.coeffs()[0].clone())
}
