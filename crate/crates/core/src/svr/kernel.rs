use crate::error::{Error, Result};

/// Gaussian RBF kernel `exp(-gamma * |x - y|^2)`.
pub fn rbf_kernel(x: &[f64], y: &[f64], gamma: f64) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    Ok(rbf_unchecked(x, y, gamma))
}

#[inline]
pub(crate) fn rbf_unchecked(x: &[f64], y: &[f64], gamma: f64) -> f64 {
    let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    (-gamma * d2).exp()
}

/// Dense symmetric kernel matrix over the training inputs.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    n: usize,
    data: Vec<f64>,
}

impl KernelMatrix {
    pub fn rbf(inputs: &[Vec<f64>], gamma: f64) -> Self {
        let n = inputs.len();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
            for j in 0..i {
                let k = rbf_unchecked(&inputs[i], &inputs[j], gamma);
                data[i * n + j] = k;
                data[j * n + i] = k;
            }
        }
        Self { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn self_similarity_is_one() {
        assert_eq!(
            rbf_kernel(&[1.0, -2.0, 3.5], &[1.0, -2.0, 3.5], 7.0).unwrap(),
            1.0
        );
    }

    #[test]
    fn unit_distance() {
        let k = rbf_kernel(&[0.0, 0.0], &[1.0, 0.0], 1.0).unwrap();
        assert!((k - (-1.0f64).exp()).abs() < 1e-15);
        assert!((k - 0.367879).abs() < 1e-6);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            rbf_kernel(&[0.0], &[0.0, 1.0], 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded(x in prop::collection::vec(-5.0f64..5.0, 3), y in prop::collection::vec(-5.0f64..5.0, 3), g in 1e-3f64..10.0) {
            let a = rbf_kernel(&x, &y, g).unwrap();
            let b = rbf_kernel(&y, &x, g).unwrap();
            prop_assert_eq!(a, b);
            prop_assert!(a >= 0.0 && a <= 1.0);
        }
    }
}
