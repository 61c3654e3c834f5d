//! Pretrained word vectors and the frozen embedding matrix.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::corpus::{Vocabulary, OOV_INDEX, PAD_INDEX};
use crate::nn::Matrix;
use crate::{Error, Result};

/// Half-width of the uniform range used for tokens without a pretrained
/// vector.
pub const MISSING_INIT_RANGE: f32 = 0.05;

/// Word vectors parsed from a text-format `.vec` file.
#[derive(Debug, Clone, Default)]
pub struct WordVectors {
    dim: usize,
    vectors: HashMap<String, Vec<f32>>,
    skipped: usize,
}

impl WordVectors {
    pub fn new(dim: usize, vectors: HashMap<String, Vec<f32>>) -> Result<Self> {
        if let Some((tok, v)) = vectors.iter().find(|(_, v)| v.len() != dim) {
            return Err(Error::Shape(format!(
                "inconsistent vector dimensions: {tok:?} has {} values, expected {dim}",
                v.len()
            )));
        }
        Ok(WordVectors {
            dim,
            vectors,
            skipped: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of data lines dropped for having the wrong number of fields.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<&[f32]> {
        self.vectors.get(token).map(Vec::as_slice)
    }
}

/// Reads `token v1 … vD` lines. A first line of exactly two integers is
/// taken as a `count dim` header. Lines with the wrong arity or unparsable
/// numbers are skipped and counted.
pub fn parse_vectors(reader: impl BufRead, dim: usize) -> std::io::Result<WordVectors> {
    let mut vectors = HashMap::new();
    let mut skipped = 0;
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if n == 0
            && fields.len() == 2
            && fields.iter().all(|f| f.parse::<u64>().is_ok())
            && dim != 1
        {
            continue;
        }
        if fields.len() != dim + 1 {
            skipped += 1;
            continue;
        }
        match fields[1..]
            .iter()
            .map(|f| f.parse::<f32>())
            .collect::<Result<Vec<_>, _>>()
        {
            Ok(v) if v.iter().all(|x| x.is_finite()) => {
                vectors.entry(fields[0].to_owned()).or_insert(v);
            }
            _ => skipped += 1,
        }
    }
    Ok(WordVectors {
        dim,
        vectors,
        skipped,
    })
}

pub fn load_vectors(path: impl AsRef<Path>, dim: usize) -> Result<WordVectors> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let vectors = parse_vectors(BufReader::new(file), dim).map_err(|e| Error::io(path, e))?;
    if vectors.is_empty() {
        return Err(Error::Format(format!(
            "{}: no parseable {dim}-dimensional vectors",
            path.display()
        )));
    }
    Ok(vectors)
}

/// Vector dimension of a `.vec` file: the header's second field if there is
/// a `count dim` header, otherwise the arity of the first line minus one.
pub fn detect_dim(path: impl AsRef<Path>) -> Result<usize> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut first = String::new();
    BufReader::new(file)
        .read_line(&mut first)
        .map_err(|e| Error::io(path, e))?;
    let fields: Vec<&str> = first.split_whitespace().collect();
    match fields.as_slice() {
        [count, dim] if count.parse::<u64>().is_ok() => dim
            .parse()
            .map_err(|_| Error::Format(format!("{}: bad vector header", path.display()))),
        [_, rest @ ..] if !rest.is_empty() => Ok(rest.len()),
        _ => Err(Error::Format(format!(
            "{}: cannot determine vector dimension",
            path.display()
        ))),
    }
}

/// Frozen `|V|×D` lookup table aligned with a [`Vocabulary`].
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    matrix: Matrix<f32>,
    coverage: f64,
}

impl EmbeddingMatrix {
    pub fn from_matrix(matrix: Matrix<f32>) -> Result<Self> {
        if matrix.rows() < 2 {
            return Err(Error::Shape("embedding needs padding and OOV rows".into()));
        }
        if matrix.row(PAD_INDEX as usize).iter().any(|&x| x != 0.0) {
            return Err(Error::Data("padding row must be zero".into()));
        }
        if matrix.data().iter().any(|x| !x.is_finite()) {
            return Err(Error::Numeric(
                "embedding contains non-finite values".into(),
            ));
        }
        Ok(EmbeddingMatrix {
            matrix,
            coverage: 0.0,
        })
    }

    pub fn matrix(&self) -> &Matrix<f32> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    /// Fraction of real vocabulary tokens that had a pretrained vector.
    pub fn coverage(&self) -> f64 {
        self.coverage
    }

    /// Hex SHA-256 over the shape and the little-endian row-major payload.
    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.matrix.rows() as u64).to_le_bytes());
        h.update((self.matrix.cols() as u64).to_le_bytes());
        for x in self.matrix.data() {
            h.update(x.to_le_bytes());
        }
        hex::encode(h.finalize())
    }
}

/// Row `i` holds the vector of vocabulary index `i`. Padding is zero; the
/// OOV row and tokens without a vector draw uniform values in
/// `[-0.05, 0.05]` from the seeded generator, in index order.
pub fn build_matrix(vocab: &Vocabulary, vectors: &WordVectors, seed: u64) -> EmbeddingMatrix {
    let dim = vectors.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut matrix = Matrix::zeros(vocab.size(), dim);
    let mut random_row = |row: &mut [f32]| {
        for x in row {
            *x = rng.gen_range(-MISSING_INIT_RANGE..=MISSING_INIT_RANGE);
        }
    };
    random_row(matrix.row_mut(OOV_INDEX as usize));
    let mut found = 0usize;
    for (i, tok) in vocab.tokens().iter().enumerate() {
        let row = matrix.row_mut(i + 2);
        match vectors.get(tok) {
            Some(v) => {
                row.copy_from_slice(v);
                found += 1;
            }
            None => random_row(row),
        }
    }
    let real = vocab.tokens().len();
    EmbeddingMatrix {
        matrix,
        coverage: if real == 0 {
            0.0
        } else {
            found as f64 / real as f64
        },
    }
}
