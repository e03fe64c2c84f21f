use std::path::Path;

use num_traits::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::features::input_dim;
use crate::pddl::DomainModel;

pub const WEIGHT_FORMAT_VERSION: u32 = 1;

/// Dense row-major matrix; `rows` is the output width.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Float> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `out += self · x`, summing each row left to right.
    pub fn mul_add(&self, x: &[T], out: &mut [T]) {
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = T::zero();
            for (w, &xi) in self.row(r).iter().zip(x) {
                acc = acc + *w * xi;
            }
            *o = *o + acc;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer<T> {
    /// One matrix per edge label `1..=max_arity`, index 0 for label 1.
    pub relations: Vec<Matrix<T>>,
    pub self_weight: Matrix<T>,
    pub bias: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMetadata {
    pub domain: String,
    pub d_in: usize,
    pub hidden: usize,
    pub max_arity: usize,
    pub num_layers: usize,
    #[serde(default = "default_normalization")]
    pub normalization: String,
    #[serde(default = "default_activation")]
    pub activation: String,
    #[serde(default = "default_pooling")]
    pub pooling: String,
    /// Free-form provenance written by the trainer.
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

fn default_normalization() -> String {
    "mean".into()
}
fn default_activation() -> String {
    "relu".into()
}
fn default_pooling() -> String {
    "add".into()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelWeights<T> {
    pub metadata: ModelMetadata,
    pub layers: Vec<Layer<T>>,
    /// Linear head `hidden -> 1`.
    pub head_weight: Vec<T>,
    pub head_bias: T,
}

#[derive(Debug, Error)]
pub enum WeightError {
    #[error("cannot read weight file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed weight file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported weight format version {found}, expected {expected}")]
    Version { found: u32, expected: u32 },
    #[error("layer {layer}: {what}")]
    Shape { layer: usize, what: String },
    #[error("head: {0}")]
    Head(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("unsupported {field} `{value}`")]
    Convention { field: &'static str, value: String },
    #[error("model is for domain `{model}` with d_in {model_d_in}, max arity {model_arity}; domain `{domain}` needs d_in {domain_d_in}, max arity {domain_arity}")]
    DomainMismatch {
        model: String,
        model_d_in: usize,
        model_arity: usize,
        domain: String,
        domain_d_in: usize,
        domain_arity: usize,
    },
    #[error("model has {found} layers, {expected} requested")]
    LayerCount { found: usize, expected: usize },
}

#[derive(Serialize, Deserialize)]
struct RawLayer {
    relations: Vec<Vec<Vec<f64>>>,
    #[serde(rename = "self")]
    self_weight: Vec<Vec<f64>>,
    bias: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawHead {
    weight: Vec<f64>,
    bias: f64,
}

#[derive(Serialize, Deserialize)]
struct RawWeights {
    format_version: u32,
    metadata: ModelMetadata,
    layers: Vec<RawLayer>,
    head: RawHead,
}

fn cast<T: Float>(x: f64) -> T {
    T::from(x).expect("float conversion")
}

fn uncast<T: Float>(x: T) -> f64 {
    x.to_f64().expect("float conversion")
}

fn matrix_from_raw<T: Float>(rows: &[Vec<f64>], layer: usize, name: &str) -> Result<Matrix<T>, WeightError> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(WeightError::Shape {
            layer,
            what: format!("{name} has ragged rows"),
        });
    }
    let data: Vec<T> = rows.iter().flatten().map(|&x| cast(x)).collect();
    Ok(Matrix {
        rows: rows.len(),
        cols,
        data,
    })
}

fn matrix_to_raw<T: Float>(m: &Matrix<T>) -> Vec<Vec<f64>> {
    (0..m.rows).map(|r| m.row(r).iter().map(|&x| uncast(x)).collect()).collect()
}

impl<T: Float> ModelWeights<T> {
    pub fn from_json_str(text: &str) -> Result<Self, WeightError> {
        let raw: RawWeights = serde_json::from_str(text)?;
        if raw.format_version != WEIGHT_FORMAT_VERSION {
            return Err(WeightError::Version {
                found: raw.format_version,
                expected: WEIGHT_FORMAT_VERSION,
            });
        }
        let mut layers = Vec::with_capacity(raw.layers.len());
        for (i, l) in raw.layers.iter().enumerate() {
            let relations = l
                .relations
                .iter()
                .enumerate()
                .map(|(r, m)| matrix_from_raw(m, i, &format!("relation {}", r + 1)))
                .collect::<Result<Vec<_>, _>>()?;
            layers.push(Layer {
                relations,
                self_weight: matrix_from_raw(&l.self_weight, i, "self")?,
                bias: l.bias.iter().map(|&x| cast(x)).collect(),
            });
        }
        let w = ModelWeights {
            metadata: raw.metadata,
            layers,
            head_weight: raw.head.weight.iter().map(|&x| cast(x)).collect(),
            head_bias: cast(raw.head.bias),
        };
        w.validate()?;
        Ok(w)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, WeightError> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> String {
        let raw = RawWeights {
            format_version: WEIGHT_FORMAT_VERSION,
            metadata: self.metadata.clone(),
            layers: self
                .layers
                .iter()
                .map(|l| RawLayer {
                    relations: l.relations.iter().map(matrix_to_raw).collect(),
                    self_weight: matrix_to_raw(&l.self_weight),
                    bias: l.bias.iter().map(|&x| uncast(x)).collect(),
                })
                .collect(),
            head: RawHead {
                weight: self.head_weight.iter().map(|&x| uncast(x)).collect(),
                bias: uncast(self.head_bias),
            },
        };
        serde_json::to_string_pretty(&raw).expect("serializable")
    }

    /// Deterministic pseudo-random weights, uniform in `[-scale, scale]`.
    pub fn random(metadata: ModelMetadata, seed: u64, scale: f64) -> Self {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut mat = |rows: usize, cols: usize| Matrix {
            rows,
            cols,
            data: (0..rows * cols).map(|_| cast(rng.gen_range(-scale..=scale))).collect(),
        };
        let mut layers = Vec::new();
        for i in 0..metadata.num_layers {
            let d = if i == 0 { metadata.d_in } else { metadata.hidden };
            let relations = (0..metadata.max_arity).map(|_| mat(metadata.hidden, d)).collect();
            let self_weight = mat(metadata.hidden, d);
            let bias = mat(metadata.hidden, 1).data;
            layers.push(Layer {
                relations,
                self_weight,
                bias,
            });
        }
        let head = mat(1, metadata.hidden).data;
        let head_bias = mat(1, 1).data[0];
        ModelWeights {
            metadata,
            layers,
            head_weight: head,
            head_bias,
        }
    }

    pub fn hidden(&self) -> usize {
        self.metadata.hidden
    }

    /// Shapes, finiteness and the supported conventions.
    pub fn validate(&self) -> Result<(), WeightError> {
        let m = &self.metadata;
        for (field, value, want) in [
            ("normalization", &m.normalization, "mean"),
            ("activation", &m.activation, "relu"),
            ("pooling", &m.pooling, "add"),
        ] {
            if value != want {
                return Err(WeightError::Convention {
                    field,
                    value: value.clone(),
                });
            }
        }
        if self.layers.len() != m.num_layers {
            return Err(WeightError::LayerCount {
                found: self.layers.len(),
                expected: m.num_layers,
            });
        }
        if m.num_layers == 0 {
            return Err(WeightError::Shape {
                layer: 0,
                what: "at least one layer is required".into(),
            });
        }
        for (i, l) in self.layers.iter().enumerate() {
            let d = if i == 0 { m.d_in } else { m.hidden };
            let shape_err = |what: String| WeightError::Shape { layer: i, what };
            if l.relations.len() != m.max_arity {
                return Err(shape_err(format!(
                    "{} relation matrices, expected {}",
                    l.relations.len(),
                    m.max_arity
                )));
            }
            for (name, mat) in l
                .relations
                .iter()
                .enumerate()
                .map(|(r, mat)| (format!("relation {}", r + 1), mat))
                .chain([("self".to_string(), &l.self_weight)])
            {
                if mat.rows != m.hidden || mat.cols != d {
                    return Err(shape_err(format!(
                        "{name} is {}x{}, expected {}x{}",
                        mat.rows, mat.cols, m.hidden, d
                    )));
                }
                if mat.data.iter().any(|x| !x.is_finite()) {
                    return Err(WeightError::NonFinite(format!("layer {i} {name}")));
                }
            }
            if l.bias.len() != m.hidden {
                return Err(shape_err(format!("bias has length {}, expected {}", l.bias.len(), m.hidden)));
            }
            if l.bias.iter().any(|x| !x.is_finite()) {
                return Err(WeightError::NonFinite(format!("layer {i} bias")));
            }
        }
        if self.head_weight.len() != m.hidden {
            return Err(WeightError::Head(format!(
                "weight has length {}, expected {}",
                self.head_weight.len(),
                m.hidden
            )));
        }
        if self.head_weight.iter().chain([&self.head_bias]).any(|x| !x.is_finite()) {
            return Err(WeightError::NonFinite("head".into()));
        }
        Ok(())
    }

    /// Refuses weights built for a different domain signature.
    pub fn check_domain(&self, domain: &DomainModel) -> Result<(), WeightError> {
        let d_in = input_dim(domain.types.len(), domain.predicates.len());
        let m = &self.metadata;
        if m.domain != domain.name || m.d_in != d_in || m.max_arity != domain.max_arity() {
            return Err(WeightError::DomainMismatch {
                model: m.domain.clone(),
                model_d_in: m.d_in,
                model_arity: m.max_arity,
                domain: domain.name.clone(),
                domain_d_in: d_in,
                domain_arity: domain.max_arity(),
            });
        }
        Ok(())
    }
}

impl ModelMetadata {
    /// Metadata matching `domain` with the default conventions.
    pub fn for_domain(domain: &DomainModel, hidden: usize, num_layers: usize) -> Self {
        ModelMetadata {
            domain: domain.name.clone(),
            d_in: input_dim(domain.types.len(), domain.predicates.len()),
            hidden,
            max_arity: domain.max_arity(),
            num_layers,
            normalization: default_normalization(),
            activation: default_activation(),
            pooling: default_pooling(),
            extra: serde_json::Map::new(),
        }
    }
}
