use ndarray::{Array2, ArrayView2, Axis};

use crate::error::{ensure_dim, Error, Result};
use crate::scalar::Scalar;

/// Feature matrix with integer class labels in `0..num_classes`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset<T> {
    features: Array2<T>,
    labels: Vec<usize>,
    num_classes: usize,
}

impl<T: Scalar> LabeledDataset<T> {
    pub fn new(features: Array2<T>, labels: Vec<usize>, num_classes: usize) -> Result<Self> {
        if features.nrows() == 0 {
            return Err(Error::InvalidDimension {
                what: "dataset rows",
                value: 0,
            });
        }
        ensure_dim("dataset label count", features.nrows(), labels.len())?;
        if num_classes == 0 {
            return Err(Error::param("num_classes", "must be positive"));
        }
        if let Some((row, &label)) = labels.iter().enumerate().find(|(_, &l)| l >= num_classes) {
            return Err(Error::LabelOutOfRange {
                row,
                label,
                classes: num_classes,
            });
        }
        Ok(Self {
            features,
            labels,
            num_classes,
        })
    }

    /// Build with `num_classes = max(label) + 1`.
    pub fn from_labels(features: Array2<T>, labels: Vec<usize>) -> Result<Self> {
        let classes = labels.iter().copied().max().map_or(1, |m| m + 1);
        Self::new(features, labels, classes)
    }

    pub fn features(&self) -> ArrayView2<'_, T> {
        self.features.view()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.ncols()
    }

    /// Rows at `indices`, in that order; keeps `num_classes`.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let features = self.features.select(Axis(0), indices);
        let labels = indices.iter().map(|&i| self.labels[i]).collect();
        Self::new(features, labels, self.num_classes)
    }

    /// Same labels, transformed features.
    pub fn map_features(&self, f: impl FnOnce(ArrayView2<T>) -> Array2<T>) -> Result<Self> {
        Self::new(f(self.features.view()), self.labels.clone(), self.num_classes)
    }

    /// Number of distinct labels actually present.
    pub fn classes_present(&self) -> usize {
        let mut seen = vec![false; self.num_classes];
        for &l in &self.labels {
            seen[l] = true;
        }
        seen.into_iter().filter(|&s| s).count()
    }
}
