//! JSON file formats for operators and quantum XOR games.
//!
//! An operator file holds the local dimensions and the matrix as two flat
//! row-major arrays of length `(n_a·n_b)²`:
//!
//! ```json
//! { "n_a": 2, "n_b": 2, "re": [1, 0, ...], "im": [0, 0, ...] }
//! ```
//!
//! A game file lists the question states as operator blocks (without
//! dimensions) next to their signs and probabilities:
//!
//! ```json
//! { "n_a": 2, "n_b": 2,
//!   "states": [ { "re": [...], "im": [...] } ],
//!   "signs": [1], "probs": [1.0] }
//! ```

use std::path::Path;

use hiding::linalg::max_asymmetry;
use hiding::{BipartiteOperator, ComplexMatrix, HermitianMatrix, QuantumXorGame, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Asymmetry above this is an error; between `SYMMETRY_TOL` and this it is a
/// warning.
pub const ASYMMETRY_REJECT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub n_a: usize,
    pub n_b: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixBlock {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub n_a: usize,
    pub n_b: usize,
    pub states: Vec<MatrixBlock>,
    pub signs: Vec<i8>,
    pub probs: Vec<f64>,
}

/// An operator read from disk plus the asymmetry removed while loading.
#[derive(Debug, Clone)]
pub struct LoadedOperator {
    pub operator: BipartiteOperator,
    pub asymmetry: f64,
}

impl LoadedOperator {
    pub fn warning(&self) -> Option<String> {
        (self.asymmetry > hiding::linalg::SYMMETRY_TOL).then(|| {
            format!("operator symmetrized: asymmetry {:e} exceeds {:e}", self.asymmetry, hiding::linalg::SYMMETRY_TOL)
        })
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            CliError::Validation(format!("file not found: {}", path.display()))
        } else {
            CliError::Io(format!("{}: {e}", path.display()))
        }
    })
}

fn schema_error(path: &Path, e: serde_json::Error) -> CliError {
    CliError::Validation(format!("{}: schema violation: {e}", path.display()))
}

fn to_matrix(dim: usize, re: &[f64], im: &[f64], what: &str) -> Result<ComplexMatrix> {
    let want = dim * dim;
    if re.len() != want {
        return Err(CliError::Validation(format!("field `{what}re` has length {}, expected {want}", re.len())));
    }
    if im.len() != want {
        return Err(CliError::Validation(format!("field `{what}im` has length {}, expected {want}", im.len())));
    }
    if let Some(k) = re.iter().chain(im).position(|x| !x.is_finite()) {
        let field = if k < want { "re" } else { "im" };
        return Err(CliError::Validation(format!(
            "field `{what}{field}` has a non-finite entry at index {}",
            k % want
        )));
    }
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| C64::new(re[i * dim + j], im[i * dim + j])))
}

fn to_hermitian(m: ComplexMatrix, what: &str) -> Result<(HermitianMatrix, f64)> {
    let asym = max_asymmetry(&m);
    if asym > ASYMMETRY_REJECT {
        return Err(CliError::Validation(format!(
            "{what}is not Hermitian: asymmetry {asym:e} exceeds {ASYMMETRY_REJECT:e}"
        )));
    }
    Ok(HermitianMatrix::new_reporting(m)?)
}

fn check_dims(n_a: usize, n_b: usize) -> Result<usize> {
    if n_a == 0 {
        return Err(CliError::Validation("field `n_a` must be positive".into()));
    }
    if n_b == 0 {
        return Err(CliError::Validation("field `n_b` must be positive".into()));
    }
    Ok(n_a * n_b)
}

impl OperatorFile {
    pub fn from_operator(z: &BipartiteOperator) -> Self {
        let n = z.dim();
        let m = z.matrix();
        let mut re = Vec::with_capacity(n * n);
        let mut im = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                re.push(m[(i, j)].re);
                im.push(m[(i, j)].im);
            }
        }
        OperatorFile { n_a: z.n_a(), n_b: z.n_b(), re, im }
    }

    /// Validates the arrays and builds a Hermitian operator.
    pub fn into_operator(self) -> Result<LoadedOperator> {
        let dim = check_dims(self.n_a, self.n_b)?;
        let m = to_matrix(dim, &self.re, &self.im, "")?;
        let (h, asymmetry) = to_hermitian(m, "operator ")?;
        Ok(LoadedOperator { operator: BipartiteOperator::hermitian(self.n_a, self.n_b, h)?, asymmetry })
    }
}

pub fn parse_operator_file(path: impl AsRef<Path>) -> Result<LoadedOperator> {
    let path = path.as_ref();
    let text = read(path)?;
    let file: OperatorFile = serde_json::from_str(&text).map_err(|e| schema_error(path, e))?;
    file.into_operator()
}

pub fn write_operator_file(path: impl AsRef<Path>, z: &BipartiteOperator) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(&OperatorFile::from_operator(z))?;
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

impl GameFile {
    pub fn from_game(game: &QuantumXorGame) -> Self {
        let (n_a, n_b) = game.dims();
        let states = game
            .states()
            .iter()
            .map(|s| {
                let block = OperatorFile::from_operator(
                    &BipartiteOperator::hermitian(n_a, n_b, s.clone()).expect("game dimensions"),
                );
                MatrixBlock { re: block.re, im: block.im }
            })
            .collect();
        GameFile { n_a, n_b, states, signs: game.signs().to_vec(), probs: game.probs().to_vec() }
    }

    pub fn into_game(self) -> Result<QuantumXorGame> {
        let dim = check_dims(self.n_a, self.n_b)?;
        let mut states = Vec::with_capacity(self.states.len());
        for (k, block) in self.states.iter().enumerate() {
            let m = to_matrix(dim, &block.re, &block.im, &format!("states[{k}]."))?;
            let (h, _) = to_hermitian(m, &format!("states[{k}] "))?;
            states.push(h);
        }
        Ok(QuantumXorGame::new(self.n_a, self.n_b, states, self.signs, self.probs)?)
    }
}

pub fn parse_game_file(path: impl AsRef<Path>) -> Result<QuantumXorGame> {
    let path = path.as_ref();
    let text = read(path)?;
    let file: GameFile = serde_json::from_str(&text).map_err(|e| schema_error(path, e))?;
    file.into_game()
}

pub fn write_game_file(path: impl AsRef<Path>, game: &QuantumXorGame) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(&GameFile::from_game(game))?;
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
