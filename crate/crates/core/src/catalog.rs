//! Named matrices and the generator lists of the named groups.

use crate::matgroup::RatMatrix;

type M4 = [[i64; 4]; 4];

const I_Q: M4 = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]];
const IJ_Q: M4 = [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]];
const ALPHA: M4 = [[-1, -1, -1, 1], [1, -1, 1, 1], [1, -1, -1, -1], [-1, -1, 1, -1]];
const ALPHA0: M4 = [[-1, 0, 0, 0], [0, 0, -1, 0], [0, -1, 0, 0], [0, 0, 0, 1]];
const ALPHA1: M4 = [[-1, -1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1], [1, 1, -1, -1]];
const K1ALPHA0: M4 = [[0, 0, 0, 1], [0, 1, 0, 0], [0, 0, -1, 0], [1, 0, 0, 0]];
const T: M4 = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
const LAMBDA1: M4 = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]];
const LAMBDA2: M4 = [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]];
const SIGMA: M4 = [[-1, 1, 1, 1], [-1, -1, -1, 1], [-1, 1, -1, -1], [-1, -1, 1, -1]];
const TAU: M4 = [[0, 0, -1, 0], [0, -1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1]];
const LAMBDA3: M4 = [[-1, 1, 1, -1], [-1, -1, -1, -1], [-1, 1, -1, 1], [1, 1, -1, -1]];
const LAMBDA4: M4 = [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0], [0, 1, 0, 0]];
const SIGMA_A: M4 = [[0, 0, 0, -1], [1, 0, 0, -1], [0, 1, 0, -1], [0, 0, 1, -1]];
const TAU3: M4 = [[0, 0, 1, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]];
const MINUS_ID: M4 = [[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]];

/// Matrix names accepted by [`matrix`].
pub const MATRIX_NAMES: &[&str] = &[
    "i", "ij", "alpha", "alpha0", "alpha1", "k1alpha0", "T", "lambda1", "lambda2", "sigma",
    "tau", "lambda3", "lambda4", "sigmaA", "tau1", "tau2", "tau3", "lambda",
];

/// Group names accepted by [`group_generators`].
pub const GROUP_NAMES: &[&str] = &[
    "Q8", "4.33.3", "4.33.6", "4.33.7", "4.33.11", "A5.std", "S5.std", "S5.twist", "A5xC2",
    "S5xC2",
];

pub fn matrix(name: &str) -> Option<RatMatrix> {
    let (rows, d) = match name {
        "i" => (I_Q, 1),
        "ij" => (IJ_Q, 1),
        "alpha" => (ALPHA, 2),
        "alpha0" => (ALPHA0, 1),
        "alpha1" => (ALPHA1, 2),
        "k1alpha0" => (K1ALPHA0, 1),
        "T" | "tau1" => (T, 1),
        "lambda1" => (LAMBDA1, 1),
        "lambda2" => (LAMBDA2, 1),
        "sigma" => (SIGMA, 2),
        "tau" => (TAU, 1),
        "lambda3" => (LAMBDA3, 2),
        "lambda4" => (LAMBDA4, 1),
        "sigmaA" => (SIGMA_A, 1),
        "tau2" => (T, -1),
        "tau3" => (TAU3, 1),
        "lambda" => (MINUS_ID, 1),
        _ => return None,
    };
    Some(RatMatrix::from_int_rows(rows, d))
}

fn generator_names(group: &str) -> Option<&'static [&'static str]> {
    Some(match group {
        "Q8" => &["i", "ij"],
        "4.33.3" => &["lambda1", "lambda2", "sigma"],
        "4.33.6" => &["lambda1", "lambda2", "sigma", "tau"],
        "4.33.7" => &["lambda1", "lambda2", "sigma", "lambda3"],
        "4.33.11" => &["lambda1", "lambda2", "sigma", "lambda3", "lambda4"],
        "A5.std" | "4.31.3" => &["sigmaA", "tau3"],
        "S5.std" | "4.31.4" => &["sigmaA", "tau1"],
        "S5.twist" | "4.31.5" => &["sigmaA", "tau2"],
        "A5xC2" | "4.31.6" => &["sigmaA", "tau3", "lambda"],
        "S5xC2" | "4.31.7" => &["sigmaA", "tau1", "lambda"],
        _ => return None,
    })
}

pub fn group_generators(group: &str) -> Option<Vec<RatMatrix>> {
    generator_names(group).map(|names| names.iter().map(|n| matrix(n).unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves() {
        for n in MATRIX_NAMES {
            assert!(matrix(n).is_some(), "{n}");
        }
        for g in GROUP_NAMES {
            assert!(group_generators(g).is_some(), "{g}");
        }
        assert!(matrix("nope").is_none());
    }
}
