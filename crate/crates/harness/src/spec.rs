//! On-disk formats: instance JSON, matroid JSON, complex JSON. Rationals
//! serialize as `"p/q"` strings so every round trip is bit exact; complex
//! entries are `{re, im}` objects of such strings.

use serde::{Deserialize, Serialize};

use tvlab_core::geometry::{Flat, Instance, Polytope};
use tvlab_core::matrix::QMatrix;
use tvlab_core::matroid::Matroid;
use tvlab_core::scalar::{format_rational, parse_rational, Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("bad scalar: {0}")]
    BadScalar(String),
    #[error("unknown field tag {0:?} (expected \"R\" or \"C\")")]
    BadField(String),
    #[error("unsupported schema version {0}")]
    BadSchema(u32),
    #[error("invalid matroid spec: {0}")]
    BadMatroid(String),
    #[error("invalid instance: {0}")]
    BadInstance(String),
}

/// A rational or complex-rational number: `"p/q"` or `{re, im}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarSpec {
    Real(String),
    Complex { re: String, im: String },
}

impl ScalarSpec {
    pub fn from_scalar(s: &Scalar) -> Self {
        if s.is_real() {
            ScalarSpec::Real(format_rational(&s.re))
        } else {
            ScalarSpec::Complex {
                re: format_rational(&s.re),
                im: format_rational(&s.im),
            }
        }
    }

    pub fn to_scalar(&self) -> Result<Scalar, SpecError> {
        match self {
            ScalarSpec::Real(s) => Ok(Scalar::from_rational(
                parse_rational(s).map_err(|e| SpecError::BadScalar(e.to_string()))?,
            )),
            ScalarSpec::Complex { re, im } => Ok(Scalar::new(
                parse_rational(re).map_err(|e| SpecError::BadScalar(e.to_string()))?,
                parse_rational(im).map_err(|e| SpecError::BadScalar(e.to_string()))?,
            )),
        }
    }
}

pub fn point_to_spec(p: &[Scalar]) -> Vec<ScalarSpec> {
    p.iter().map(ScalarSpec::from_scalar).collect()
}

pub fn point_from_spec(p: &[ScalarSpec]) -> Result<Vec<Scalar>, SpecError> {
    p.iter().map(ScalarSpec::to_scalar).collect()
}

pub fn field_tag(field: Field) -> &'static str {
    match field {
        Field::Real => "R",
        Field::Complex => "C",
    }
}

pub fn parse_field(tag: &str) -> Result<Field, SpecError> {
    match tag {
        "R" => Ok(Field::Real),
        "C" => Ok(Field::Complex),
        other => Err(SpecError::BadField(other.to_string())),
    }
}

/// Matroid description by backend.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "kebab-case")]
pub enum MatroidSpec {
    Uniform { rank: usize, n: usize },
    Partition { classes: Vec<Vec<usize>> },
    Linear { columns: Vec<Vec<ScalarSpec>> },
    Explicit { n: usize, bases: Vec<Vec<usize>> },
}

impl MatroidSpec {
    pub fn build(&self) -> Result<Matroid, SpecError> {
        let wrap = |e: tvlab_core::matroid::MatroidError| SpecError::BadMatroid(e.to_string());
        match self {
            MatroidSpec::Uniform { rank, n } => Matroid::uniform(*rank, *n).map_err(wrap),
            MatroidSpec::Partition { classes } => {
                Matroid::partition_from_classes(classes).map_err(wrap)
            }
            MatroidSpec::Linear { columns } => {
                let cols: Result<Vec<Vec<Scalar>>, SpecError> =
                    columns.iter().map(|c| point_from_spec(c)).collect();
                Ok(Matroid::linear(QMatrix::from_columns(cols?)))
            }
            MatroidSpec::Explicit { n, bases } => {
                let sets = bases.iter().map(|b| b.iter().copied().collect()).collect();
                Matroid::from_bases(*n, sets).map_err(wrap)
            }
        }
    }
}

/// An affine flat, for ground-truth provenance and tool output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatSpec {
    pub base: Vec<ScalarSpec>,
    pub dirs: Vec<Vec<ScalarSpec>>,
}

impl FlatSpec {
    pub fn from_flat(f: &Flat) -> Self {
        FlatSpec {
            base: point_to_spec(f.base()),
            dirs: f.dirs().iter().map(|d| point_to_spec(d)).collect(),
        }
    }

    pub fn to_flat(&self, field: Field) -> Result<Flat, SpecError> {
        let base = point_from_spec(&self.base)?;
        let dirs: Result<Vec<Vec<Scalar>>, SpecError> =
            self.dirs.iter().map(|d| point_from_spec(d)).collect();
        Flat::new(field, base, dirs?).map_err(|e| SpecError::BadInstance(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ground_truth_flat: Option<FlatSpec>,
}

pub const SCHEMA_VERSION: u32 = 1;

/// The complete serialized instance. `to_instance` re-validates every
/// invariant on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub schema: u32,
    pub field: String,
    pub d: usize,
    pub k: usize,
    pub r: usize,
    pub polytopes: Vec<Vec<Vec<ScalarSpec>>>,
    pub matroid: MatroidSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coloring: Option<Vec<Vec<usize>>>,
    pub phi: Vec<Vec<ScalarSpec>>,
    pub provenance: Provenance,
}

impl InstanceSpec {
    pub fn from_instance(
        inst: &Instance,
        matroid: MatroidSpec,
        provenance: Provenance,
    ) -> Self {
        InstanceSpec {
            schema: SCHEMA_VERSION,
            field: field_tag(inst.field).to_string(),
            d: inst.d,
            k: inst.k,
            r: inst.r,
            polytopes: inst
                .polytopes
                .iter()
                .map(|p| p.vertices().iter().map(|v| point_to_spec(v)).collect())
                .collect(),
            matroid,
            coloring: inst.coloring.clone(),
            phi: inst.phi.iter().map(|img| point_to_spec(img)).collect(),
            provenance,
        }
    }

    pub fn to_instance(&self) -> Result<Instance, SpecError> {
        if self.schema != SCHEMA_VERSION {
            return Err(SpecError::BadSchema(self.schema));
        }
        let field = parse_field(&self.field)?;
        let polytopes: Result<Vec<Polytope>, SpecError> = self
            .polytopes
            .iter()
            .map(|verts| {
                let vs: Result<Vec<Vec<Scalar>>, SpecError> =
                    verts.iter().map(|v| point_from_spec(v)).collect();
                Polytope::new(field, self.d, vs?)
                    .map_err(|e| SpecError::BadInstance(e.to_string()))
            })
            .collect();
        let matroid = self.matroid.build()?;
        // a coloring, when present, must be the partition backend it induces
        if let Some(classes) = &self.coloring {
            match &self.matroid {
                MatroidSpec::Partition { classes: mc } if mc == classes => {}
                _ => {
                    return Err(SpecError::BadInstance(
                        "coloring must induce the partition matroid backend".into(),
                    ))
                }
            }
        }
        let phi: Result<Vec<Vec<Scalar>>, SpecError> =
            self.phi.iter().map(|img| point_from_spec(img)).collect();
        Instance::new(
            field,
            self.d,
            self.k,
            self.r,
            polytopes?,
            self.coloring.clone(),
            matroid,
            phi?,
        )
        .map_err(|e| SpecError::BadInstance(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance specs always serialize")
    }

    pub fn from_json(s: &str) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Simplicial complex file format: `{vertices, facets}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub vertices: Vec<usize>,
    pub facets: Vec<Vec<usize>>,
}

impl ComplexSpec {
    pub fn from_complex(k: &tvlab_core::complexes::SimplicialComplex) -> Self {
        ComplexSpec {
            vertices: k.vertices().to_vec(),
            facets: k.facets().to_vec(),
        }
    }

    pub fn to_complex(&self) -> anyhow::Result<tvlab_core::complexes::SimplicialComplex> {
        let facets = self.facets.iter().map(|f| f.iter().copied().collect()).collect();
        Ok(tvlab_core::complexes::SimplicialComplex::from_facets(facets)?)
    }
}
