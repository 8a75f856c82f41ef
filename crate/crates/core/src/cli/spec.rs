use std::path::Path;

use num_rational::BigRational;
use serde::Deserialize;
use thiserror::Error;

use crate::frame::{check_frame_axioms, FiniteFrame, RawOrder};
use crate::instances::{builtin, Instance};
use crate::uniform::{
    metric_uniformity, parse_rational, validate_uniformity, Cover, FiniteMetric, UniformityBase,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid instance: {0}")]
    Validation(String),
}

/// The on-disk format, schema version 1. Either `frame` with `uniformity`, or
/// `metric`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct Document {
    pub schema: u32,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub frame: Option<FrameSpec>,
    #[serde(default)]
    pub uniformity: Option<UniformitySpec>,
    #[serde(default)]
    pub metric: Option<MetricSpec>,
    #[serde(default)]
    pub options: OptionsSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct FrameSpec {
    pub elements: Vec<String>,
    /// Pairs `[a, b]` meaning `a ≤ b`; the order is their reflexive
    /// transitive closure.
    #[serde(default)]
    pub order: Vec<(String, String)>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct UniformitySpec {
    pub covers: Vec<Vec<String>>,
    #[serde(default)]
    pub star_witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct MetricSpec {
    pub points: Vec<String>,
    /// Rows of `"n/d"` strings.
    pub distances: Vec<Vec<String>>,
    /// Strictly decreasing radii, as `"n/d"` strings.
    pub schedule: Vec<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct OptionsSpec {
    #[serde(default)]
    pub horizon: Option<usize>,
    #[serde(default)]
    pub budget: Option<usize>,
}

/// A validated instance with the defaults it carries.
#[derive(Debug, Clone)]
pub struct InstanceSpec {
    pub instance: Instance,
    pub horizon: Option<usize>,
    pub budget: Option<usize>,
}

fn invalid(msg: impl Into<String>) -> SpecError {
    SpecError::Validation(msg.into())
}

pub(crate) fn read_document(text: &str) -> Result<Document, SpecError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| SpecError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.schema != 1 {
        return Err(invalid(format!("unsupported schema {}", doc.schema)));
    }
    Ok(doc)
}

pub(crate) fn raw_order(spec: &FrameSpec) -> Result<RawOrder, SpecError> {
    RawOrder::from_pairs(&spec.elements, &spec.order).map_err(|e| invalid(e.to_string()))
}

/// Resolves cover members by name; star witnesses default to the first
/// listed star refinement.
pub(crate) fn resolve_base(f: &FiniteFrame, spec: &UniformitySpec) -> Result<UniformityBase, SpecError> {
    let mut covers = Vec::with_capacity(spec.covers.len());
    for (j, members) in spec.covers.iter().enumerate() {
        let mut elems = Vec::with_capacity(members.len());
        for m in members {
            let e = f
                .elem(m)
                .ok_or_else(|| invalid(format!("cover U{j} member `{m}` is not an element")))?;
            elems.push(e);
        }
        covers.push(Cover::new(elems));
    }
    Ok(match &spec.star_witness {
        Some(w) => UniformityBase {
            covers,
            star_witness: w.clone(),
        },
        None => UniformityBase::with_found_witnesses(f, covers),
    })
}

pub(crate) fn resolve_metric(spec: &MetricSpec) -> Result<(FiniteMetric, Vec<BigRational>), SpecError> {
    let rational = |s: &String| parse_rational(s).ok_or_else(|| invalid(format!("bad rational `{s}`")));
    let dist = spec
        .distances
        .iter()
        .map(|row| row.iter().map(rational).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let schedule = spec.schedule.iter().map(rational).collect::<Result<Vec<_>, _>>()?;
    Ok((
        FiniteMetric {
            points: spec.points.clone(),
            dist,
        },
        schedule,
    ))
}

/// Builds the instance, rejecting the first failing invariant.
pub(crate) fn build(doc: &Document, default_name: &str) -> Result<InstanceSpec, SpecError> {
    let name = doc.name.clone().unwrap_or_else(|| default_name.to_string());
    let (frame, base) = match (&doc.frame, &doc.uniformity, &doc.metric) {
        (Some(fs), Some(us), None) => {
            let order = raw_order(fs)?;
            let report = check_frame_axioms(&order).map_err(|e| invalid(e.to_string()))?;
            if let Some(v) = report.violations.first() {
                return Err(invalid(format!("not a frame: {v}")));
            }
            let frame = FiniteFrame::new(order).map_err(|e| invalid(e.to_string()))?;
            let base = resolve_base(&frame, us)?;
            (frame, base)
        }
        (None, None, Some(ms)) => {
            let (space, schedule) = resolve_metric(ms)?;
            metric_uniformity(&space, &schedule).map_err(|e| invalid(e.to_string()))?
        }
        _ => return Err(invalid("expected `frame` with `uniformity`, or `metric`")),
    };
    if let Some(v) = validate_uniformity(&base, &frame).violations.first() {
        return Err(invalid(format!("not a pre-uniformity: {v}")));
    }
    Ok(InstanceSpec {
        instance: Instance { name, frame, base },
        horizon: doc.options.horizon,
        budget: doc.options.budget,
    })
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".to_string())
}

pub(crate) fn read_file(path: &Path) -> Result<String, SpecError> {
    std::fs::read_to_string(path).map_err(|e| SpecError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn parse_spec_str(text: &str, default_name: &str) -> Result<InstanceSpec, SpecError> {
    build(&read_document(text)?, default_name)
}

pub fn parse_spec(path: &Path) -> Result<InstanceSpec, SpecError> {
    parse_spec_str(&read_file(path)?, &stem(path))
}

/// A built-in instance name or a path to a spec file.
pub fn load_instance(arg: &str) -> Result<InstanceSpec, SpecError> {
    if let Some(instance) = builtin(arg) {
        return Ok(InstanceSpec {
            instance,
            horizon: None,
            budget: None,
        });
    }
    if arg == "rational-line" {
        return Err(invalid("rational-line is not finite; pass a sequence with --seq"));
    }
    parse_spec(Path::new(arg))
}
