//! Scenario files: JSON documents describing one chart and the data the
//! requested checks run on. Expressions use the symexpr grammar over the
//! chart's coordinate names; frame and form indices are 1-based.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use algebroid_core::algebroid::AlgebroidData;
use algebroid_core::calculus::{sort_with_sign, AForm, Alternating, Multivector};
use algebroid_core::cosymplectic::CosymplecticData;
use algebroid_core::geometry::{SubmanifoldSpec, WeinsteinSplit};
use algebroid_core::symexpr::{parse, Chart, Coordinate, Expr, Rational};
use serde::Deserialize;

use crate::catalog::{self, CheckInfo, Needs};

pub const SCHEMA_VERSION: u32 = 1;

/// A scenario that does not parse or does not resolve.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct ScenarioError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, ScenarioError> {
    Err(ScenarioError(msg.into()))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema: u32,
    pub name: String,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub chart: ChartSpec,
    pub algebroid: AlgebroidSpec,
    #[serde(default)]
    pub bivector: Option<FormSpec>,
    #[serde(default)]
    pub cosymplectic: Option<CosymplecticSpec>,
    #[serde(default)]
    pub submanifolds: Vec<SubmanifoldEntry>,
    #[serde(default)]
    pub one_forms: Vec<FormSpec>,
    #[serde(default)]
    pub split: Option<SplitSpec>,
    #[serde(default)]
    pub numeric: Option<NumericSpec>,
    pub checks: Vec<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    #[serde(default)]
    pub base: Vec<String>,
    #[serde(default)]
    pub fibre: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AlgebroidSpec {
    /// Tangent bundle of the chart with the coordinate frame.
    Tangent,
    /// Anchor rows and brackets `[e_i, e_j]` for `i < j` in a global frame.
    Frame {
        rank: usize,
        #[serde(default)]
        anchor: Option<Vec<Vec<String>>>,
        #[serde(default)]
        brackets: Vec<BracketSpec>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    pub pair: [usize; 2],
    pub value: Vec<String>,
}

/// An alternating tensor on the algebroid frame: a form or a multivector.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    pub degree: usize,
    #[serde(default)]
    pub components: Vec<ComponentSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub index: Vec<usize>,
    pub value: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosymplecticSpec {
    #[serde(default)]
    pub alphas: Vec<FormSpec>,
    pub omega: FormSpec,
}

/// `L = {u = 0}` for the listed normal coordinates.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmanifoldEntry {
    pub name: String,
    pub normal: Vec<String>,
}

/// `π = Σ ∂q_i∧∂p_i + θ(y)` with `θ` on the transverse coordinates; ranks
/// are compared on the product grid of `values` over `(y, w)`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSpec {
    pub pairs: usize,
    pub transverse: Vec<String>,
    pub theta: FormSpec,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericSpec {
    pub half_width: String,
    pub grid: usize,
    #[serde(default)]
    pub step: Option<String>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    pub submanifold: String,
    /// Structure the Moser flow starts from.
    #[serde(default)]
    pub target: Option<CosymplecticSpec>,
    /// Closed form for the homotopy primitive.
    #[serde(default)]
    pub form: Option<FormSpec>,
    /// File the flow map is written to, relative to the working directory.
    #[serde(default)]
    pub dump: Option<String>,
}

/// Resolved numeric block.
#[derive(Debug, Clone)]
pub struct Numeric {
    pub half_width: Rational,
    pub grid: usize,
    pub step: Option<Rational>,
    pub tolerance: Option<f64>,
    pub submanifold: SubmanifoldSpec,
    pub target: Option<CosymplecticData>,
    pub form: Option<AForm>,
    pub dump: Option<PathBuf>,
}

/// A scenario with every name and expression resolved.
#[derive(Debug, Clone)]
pub struct World {
    pub name: String,
    pub chart: Chart,
    pub algebroid: AlgebroidData,
    pub bivector: Option<Multivector>,
    pub cosymplectic: Option<CosymplecticData>,
    pub submanifolds: Vec<(String, SubmanifoldSpec)>,
    pub one_forms: Vec<Vec<Expr>>,
    pub split: Option<(WeinsteinSplit, Vec<Rational>)>,
    pub numeric: Option<Numeric>,
    pub checks: Vec<&'static CheckInfo>,
}

pub fn load(path: &Path) -> Result<World, ScenarioError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ScenarioError(format!("{}: {}", path.display(), e)))?;
    parse_scenario(&text)
}

pub fn parse_scenario(text: &str) -> Result<World, ScenarioError> {
    let file: ScenarioFile =
        serde_json::from_str(text).map_err(|e| ScenarioError(format!("scenario: {}", e)))?;
    file.resolve()
}

fn expr(s: &str, chart: &Chart) -> Result<Expr, ScenarioError> {
    parse(s, chart).map_err(|e| ScenarioError(format!("expression {:?}: {}", s, e)))
}

fn rational(s: &str, what: &str) -> Result<Rational, ScenarioError> {
    Rational::from_str(s.trim())
        .map_err(|_| ScenarioError(format!("{}: {:?} is not a rational number", what, s)))
}

fn alternating(
    spec: &FormSpec,
    rank: usize,
    chart: &Chart,
    what: &str,
) -> Result<Alternating, ScenarioError> {
    if spec.degree > rank {
        return err(format!(
            "{}: degree {} exceeds rank {}",
            what, spec.degree, rank
        ));
    }
    let mut out = Alternating::zero(rank, spec.degree);
    for c in &spec.components {
        if c.index.len() != spec.degree {
            return err(format!(
                "{}: index {:?} has length {}, expected {}",
                what,
                c.index,
                c.index.len(),
                spec.degree
            ));
        }
        if c.index.iter().any(|&i| i == 0 || i > rank) {
            return err(format!(
                "{}: index {:?} outside 1..={}",
                what, c.index, rank
            ));
        }
        let zero_based: Vec<usize> = c.index.iter().map(|i| i - 1).collect();
        let Some((sorted, sign)) = sort_with_sign(&zero_based) else {
            return err(format!("{}: index {:?} repeats an entry", what, c.index));
        };
        let v = expr(&c.value, chart)?;
        let v = if sign < 0 { -&v } else { v };
        out.add_to(sorted, &v);
    }
    Ok(out)
}

fn one_form(
    spec: &FormSpec,
    rank: usize,
    chart: &Chart,
    what: &str,
) -> Result<AForm, ScenarioError> {
    if spec.degree != 1 {
        return err(format!(
            "{}: expected a one-form, got degree {}",
            what, spec.degree
        ));
    }
    Ok(AForm(alternating(spec, rank, chart, what)?))
}

fn cosymplectic(
    spec: &CosymplecticSpec,
    a: &AlgebroidData,
    what: &str,
) -> Result<CosymplecticData, ScenarioError> {
    let chart = a.chart();
    let alphas = spec
        .alphas
        .iter()
        .enumerate()
        .map(|(i, f)| one_form(f, a.rank(), chart, &format!("{} alpha {}", what, i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    if spec.omega.degree != 2 {
        return err(format!("{} omega: expected a two-form", what));
    }
    let omega = AForm(alternating(
        &spec.omega,
        a.rank(),
        chart,
        &format!("{} omega", what),
    )?);
    CosymplecticData::new(a.clone(), alphas, omega)
        .map_err(|e| ScenarioError(format!("{}: {}", what, e)))
}

impl ScenarioFile {
    pub fn resolve(&self) -> Result<World, ScenarioError> {
        if self.schema != SCHEMA_VERSION {
            return err(format!(
                "schema version {} (this tool reads {})",
                self.schema, SCHEMA_VERSION
            ));
        }
        let mut names: Vec<&String> = self.chart.base.iter().chain(&self.chart.fibre).collect();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return err("chart: coordinate names repeat");
        }
        let chart = Chart::new(
            self.chart
                .base
                .iter()
                .map(|n| Coordinate::base(n.as_str()))
                .chain(
                    self.chart
                        .fibre
                        .iter()
                        .map(|n| Coordinate::fibre(n.as_str())),
                )
                .collect(),
        );
        let algebroid = self.algebroid.resolve(&chart)?;
        let r = algebroid.rank();
        let bivector = match &self.bivector {
            Some(b) if b.degree != 2 => return err("bivector: expected degree 2"),
            Some(b) => Some(Multivector(alternating(b, r, &chart, "bivector")?)),
            None => None,
        };
        let cosymplectic = match &self.cosymplectic {
            Some(c) => Some(cosymplectic(c, &algebroid, "cosymplectic")?),
            None => None,
        };
        let mut submanifolds = Vec::new();
        for s in &self.submanifolds {
            if submanifolds.iter().any(|(n, _)| n == &s.name) {
                return err(format!("submanifold {:?} is defined twice", s.name));
            }
            let normal: Vec<&str> = s.normal.iter().map(|n| n.as_str()).collect();
            let spec = SubmanifoldSpec::from_names(&chart, &normal)
                .map_err(|e| ScenarioError(format!("submanifold {:?}: {}", s.name, e)))?;
            submanifolds.push((s.name.clone(), spec));
        }
        let one_forms = self
            .one_forms
            .iter()
            .enumerate()
            .map(|(i, f)| {
                one_form(f, r, &chart, &format!("one-form {}", i + 1)).map(|a| a.as_covector())
            })
            .collect::<Result<Vec<_>, _>>()?;
        let split = match &self.split {
            Some(s) => {
                let names: Vec<&str> = s.transverse.iter().map(|n| n.as_str()).collect();
                let y_chart = Chart::base(&names);
                if s.theta.degree != 2 {
                    return err("split theta: expected degree 2");
                }
                let theta =
                    Multivector(alternating(&s.theta, names.len(), &y_chart, "split theta")?);
                let split = WeinsteinSplit::new(s.pairs, &names, theta)
                    .map_err(|e| ScenarioError(format!("split: {}", e)))?;
                let values = s
                    .values
                    .iter()
                    .map(|v| rational(v, "split values"))
                    .collect::<Result<Vec<_>, _>>()?;
                if values.is_empty() {
                    return err("split: no sample values");
                }
                Some((split, values))
            }
            None => None,
        };
        let numeric = match &self.numeric {
            Some(n) => Some(n.resolve(&algebroid, &submanifolds)?),
            None => None,
        };
        let mut checks: Vec<&'static CheckInfo> = Vec::new();
        for name in &self.checks {
            let Some(info) = catalog::find(name) else {
                return err(format!("unknown check {:?}", name));
            };
            if !checks.contains(&info) {
                checks.push(info);
            }
        }
        let world = World {
            name: self.name.clone(),
            chart,
            algebroid,
            bivector,
            cosymplectic,
            submanifolds,
            one_forms,
            split,
            numeric,
            checks,
        };
        Ok(world)
    }
}

impl AlgebroidSpec {
    fn resolve(&self, chart: &Chart) -> Result<AlgebroidData, ScenarioError> {
        match self {
            AlgebroidSpec::Tangent => Ok(AlgebroidData::tangent(chart.clone())),
            AlgebroidSpec::Frame {
                rank,
                anchor,
                brackets,
            } => {
                let r = *rank;
                let n = chart.len();
                let anchor = match anchor {
                    Some(rows) => {
                        if rows.len() != r {
                            return err(format!("anchor: {} rows for rank {}", rows.len(), r));
                        }
                        rows.iter()
                            .map(|row| {
                                if row.len() != n {
                                    return err(format!(
                                        "anchor: row of length {} on a chart of dimension {}",
                                        row.len(),
                                        n
                                    ));
                                }
                                row.iter().map(|s| expr(s, chart)).collect()
                            })
                            .collect::<Result<Vec<Vec<Expr>>, _>>()?
                    }
                    None => vec![vec![Expr::zero(); n]; r],
                };
                let mut table = Vec::new();
                for b in brackets {
                    let [i, j] = b.pair;
                    if i == 0 || j == 0 || i > r || j > r || i >= j {
                        return err(format!("bracket pair {:?}: need 1 ≤ i < j ≤ {}", b.pair, r));
                    }
                    if b.value.len() != r {
                        return err(format!(
                            "bracket {:?}: {} components for rank {}",
                            b.pair,
                            b.value.len(),
                            r
                        ));
                    }
                    let v = b
                        .value
                        .iter()
                        .map(|s| expr(s, chart))
                        .collect::<Result<Vec<_>, _>>()?;
                    table.push(((i - 1, j - 1), v));
                }
                AlgebroidData::new(chart.clone(), anchor, &table)
                    .map_err(|e| ScenarioError(format!("algebroid: {}", e)))
            }
        }
    }
}

impl NumericSpec {
    fn resolve(
        &self,
        a: &AlgebroidData,
        subs: &[(String, SubmanifoldSpec)],
    ) -> Result<Numeric, ScenarioError> {
        let half_width = rational(&self.half_width, "numeric half_width")?;
        let step = self
            .step
            .as_deref()
            .map(|s| rational(s, "numeric step"))
            .transpose()?;
        let Some((_, l)) = subs.iter().find(|(n, _)| n == &self.submanifold) else {
            return err(format!(
                "numeric: unknown submanifold {:?}",
                self.submanifold
            ));
        };
        let target = match &self.target {
            Some(t) => Some(cosymplectic(t, a, "numeric target")?),
            None => None,
        };
        let form = match &self.form {
            Some(f) => Some(AForm(alternating(f, a.rank(), a.chart(), "numeric form")?)),
            None => None,
        };
        Ok(Numeric {
            half_width,
            grid: self.grid,
            step,
            tolerance: self.tolerance,
            submanifold: l.clone(),
            target,
            form,
            dump: self.dump.as_ref().map(PathBuf::from),
        })
    }
}

impl World {
    /// Names of missing prerequisites of a check.
    pub fn missing(&self, info: &CheckInfo) -> Vec<&'static str> {
        let mut out = Vec::new();
        for need in info.needs {
            let present = match need {
                Needs::Bivector => self.bivector.is_some(),
                Needs::Cosymplectic => self.cosymplectic.is_some(),
                Needs::Submanifolds => !self.submanifolds.is_empty(),
                Needs::OneForms => !self.one_forms.is_empty(),
                Needs::Split => self.split.is_some(),
                Needs::Numeric => self.numeric.is_some(),
                Needs::Target => self.numeric.as_ref().is_some_and(|n| n.target.is_some()),
                Needs::Form => self.numeric.as_ref().is_some_and(|n| n.form.is_some()),
                Needs::FibreChart => (0..self.chart.len())
                    .any(|i| self.chart.kind(i) == algebroid_core::symexpr::CoordKind::Fibre),
            };
            if !present {
                out.push(need.describe());
            }
        }
        out
    }

    /// Replace the requested checks (command-line selection).
    pub fn select(&mut self, names: &[String]) -> Result<(), ScenarioError> {
        let mut checks = Vec::new();
        for name in names {
            let Some(info) = catalog::find(name) else {
                return err(format!("unknown check {:?}", name));
            };
            if !checks.contains(&info) {
                checks.push(info);
            }
        }
        self.checks = checks;
        Ok(())
    }

    /// Every requested check has its prerequisites.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.checks.is_empty() {
            return err("no checks requested");
        }
        for info in &self.checks {
            let missing = self.missing(info);
            if !missing.is_empty() {
                return err(format!("check {} needs {}", info.name, missing.join(", ")));
            }
        }
        Ok(())
    }
}
