//! Observed units and points in input–output space.

use thiserror::Error;

use crate::real::Real;

/// A point `(x, y)` with `m` input and `s` output coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
}

impl<T: Real> Point<T> {
    pub fn new(x: Vec<T>, y: Vec<T>) -> Self {
        Point { x, y }
    }

    pub fn num_inputs(&self) -> usize {
        self.x.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.y.len()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.x.iter().chain(&self.y).all(|&v| v >= T::zero())
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.x.iter().chain(&self.y).all(|&v| v > T::zero())
    }

    /// Weak dominance: no worse in every coordinate (inputs ≤, outputs ≥)
    /// and strictly better somewhere.
    pub fn dominates(&self, other: &Point<T>) -> bool {
        let no_worse = self.x.iter().zip(&other.x).all(|(&a, &b)| a <= b)
            && self.y.iter().zip(&other.y).all(|(&a, &b)| a >= b);
        no_worse && (self.x != other.x || self.y != other.y)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DataError {
    #[error("dataset must contain at least one DMU")]
    Empty,
    #[error("DMU {id:?} has {got} {kind} values, expected {expected}")]
    Ragged { id: String, kind: &'static str, got: usize, expected: usize },
    #[error("dataset needs at least one input and one output column")]
    NoColumns,
    #[error("duplicate DMU id {0:?}")]
    DuplicateId(String),
    #[error("non-positive {kind} value {value} for DMU {id:?}")]
    NonPositive { id: String, kind: &'static str, value: String },
}

/// Observed DMUs: `n` units, each with strictly positive input vector
/// (length `m`) and output vector (length `s`).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    ids: Vec<String>,
    inputs: Vec<Vec<T>>,
    outputs: Vec<Vec<T>>,
}

impl<T: Real> Dataset<T> {
    pub fn new(ids: Vec<String>, inputs: Vec<Vec<T>>, outputs: Vec<Vec<T>>) -> Result<Self, DataError> {
        if ids.is_empty() {
            return Err(DataError::Empty);
        }
        if ids.len() != inputs.len() || ids.len() != outputs.len() {
            return Err(DataError::Ragged {
                id: String::new(),
                kind: "row",
                got: inputs.len().min(outputs.len()),
                expected: ids.len(),
            });
        }
        let m = inputs[0].len();
        let s = outputs[0].len();
        if m == 0 || s == 0 {
            return Err(DataError::NoColumns);
        }
        for (j, id) in ids.iter().enumerate() {
            if inputs[j].len() != m {
                return Err(DataError::Ragged { id: id.clone(), kind: "input", got: inputs[j].len(), expected: m });
            }
            if outputs[j].len() != s {
                return Err(DataError::Ragged { id: id.clone(), kind: "output", got: outputs[j].len(), expected: s });
            }
            if ids[..j].contains(id) {
                return Err(DataError::DuplicateId(id.clone()));
            }
            for (&v, kind) in inputs[j]
                .iter()
                .map(|v| (v, "input"))
                .chain(outputs[j].iter().map(|v| (v, "output")))
            {
                if !(v > T::zero()) || !v.is_finite() {
                    return Err(DataError::NonPositive { id: id.clone(), kind, value: format!("{v}") });
                }
            }
        }
        Ok(Dataset { ids, inputs, outputs })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs[0].len()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs[0].len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, j: usize) -> &str {
        &self.ids[j]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|i| i == id)
    }

    pub fn input(&self, j: usize) -> &[T] {
        &self.inputs[j]
    }

    pub fn output(&self, j: usize) -> &[T] {
        &self.outputs[j]
    }

    pub fn point(&self, j: usize) -> Point<T> {
        Point::new(self.inputs[j].clone(), self.outputs[j].clone())
    }
}
