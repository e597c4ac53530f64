use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, SymbolStream};
use crate::dist::SUM_TOLERANCE;
use crate::error::{Error, Result};
use crate::pfsa::sample_index;

/// Ground-truth generator for a pair of cross-coupled processes. At every
/// step each process draws its next symbol conditioned on the *other*
/// process's current symbol.
///
/// `next_a_given_b[b]` is the distribution of the next A-symbol when B's
/// current symbol is `b`, and symmetrically for `next_b_given_a`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoupledSystemSpec {
    pub alphabet_a: Vec<String>,
    pub alphabet_b: Vec<String>,
    pub init_a: String,
    pub init_b: String,
    pub next_a_given_b: Vec<Vec<f64>>,
    pub next_b_given_a: Vec<Vec<f64>>,
}

impl CoupledSystemSpec {
    /// The binary example system used throughout the tests: A's next symbol
    /// copies B's current one with probability 0.8, while B is a fair coin
    /// regardless of A.
    pub fn skewed_binary_example() -> Self {
        Self {
            alphabet_a: vec!["0".into(), "1".into()],
            alphabet_b: vec!["0".into(), "1".into()],
            init_a: "0".into(),
            init_b: "0".into(),
            next_a_given_b: vec![vec![0.8, 0.2], vec![0.2, 0.8]],
            next_b_given_a: vec![vec![0.5, 0.5], vec![0.5, 0.5]],
        }
    }

    fn validated(&self) -> Result<(Alphabet, Alphabet, u8, u8)> {
        let alpha_a = Alphabet::new(self.alphabet_a.clone())?;
        let alpha_b = Alphabet::new(self.alphabet_b.clone())?;
        check_table(&self.next_a_given_b, alpha_b.len(), alpha_a.len(), "next_a_given_b")?;
        check_table(&self.next_b_given_a, alpha_a.len(), alpha_b.len(), "next_b_given_a")?;
        let init_a = alpha_a.index_of(&self.init_a)?;
        let init_b = alpha_b.index_of(&self.init_b)?;
        Ok((alpha_a, alpha_b, init_a, init_b))
    }
}

fn check_table(table: &[Vec<f64>], rows: usize, cols: usize, name: &str) -> Result<()> {
    if table.len() != rows {
        return Err(Error::InvalidInput(format!(
            "{name} has {} rows, expected {rows}",
            table.len()
        )));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::InvalidInput(format!(
                "{name} row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        if row.iter().any(|p| *p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidInput(format!("{name} row {i} has a negative entry")));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidInput(format!("{name} row {i} sums to {sum}")));
        }
    }
    Ok(())
}

/// Simulates the coupled pair for `length` steps. The first symbols are the
/// declared initial ones; symbols at step k+1 are drawn conditioned on the
/// partner's symbol at step k. Deterministic for a fixed seed.
pub fn simulate_coupled(
    spec: &CoupledSystemSpec,
    length: usize,
    seed: u64,
) -> Result<(SymbolStream, SymbolStream)> {
    let (alpha_a, alpha_b, init_a, init_b) = spec.validated()?;
    if length == 0 {
        return Ok((SymbolStream::empty(alpha_a), SymbolStream::empty(alpha_b)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = Vec::with_capacity(length);
    let mut b = Vec::with_capacity(length);
    a.push(init_a);
    b.push(init_b);
    for k in 1..length {
        let prev_a = a[k - 1] as usize;
        let prev_b = b[k - 1] as usize;
        a.push(sample_index(&spec.next_a_given_b[prev_b], &mut rng) as u8);
        b.push(sample_index(&spec.next_b_given_a[prev_a], &mut rng) as u8);
    }
    Ok((SymbolStream::new(alpha_a, a)?, SymbolStream::new(alpha_b, b)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_length_gives_empty_streams() {
        let spec = CoupledSystemSpec::skewed_binary_example();
        let (a, b) = simulate_coupled(&spec, 0, 1).unwrap();
        assert!(a.is_empty() && b.is_empty());
    }

    #[test]
    fn deterministic_given_seed() {
        let spec = CoupledSystemSpec::skewed_binary_example();
        let (a1, b1) = simulate_coupled(&spec, 1000, 42).unwrap();
        let (a2, b2) = simulate_coupled(&spec, 1000, 42).unwrap();
        assert_eq!(a1, a2);
        assert_eq!(b1, b2);
    }

    #[test]
    fn rejects_malformed_rows() {
        let mut spec = CoupledSystemSpec::skewed_binary_example();
        spec.next_a_given_b[0] = vec![0.8, 0.1];
        assert!(simulate_coupled(&spec, 10, 1).is_err());
    }

    #[test]
    fn independent_uniform_joint_factorizes() {
        let spec = CoupledSystemSpec {
            alphabet_a: vec!["0".into(), "1".into()],
            alphabet_b: vec!["0".into(), "1".into()],
            init_a: "0".into(),
            init_b: "0".into(),
            next_a_given_b: vec![vec![0.5, 0.5], vec![0.5, 0.5]],
            next_b_given_a: vec![vec![0.5, 0.5], vec![0.5, 0.5]],
        };
        let n = 1_000_000;
        let (a, b) = simulate_coupled(&spec, n, 13).unwrap();
        // joint of (a[k+1], b[k]) against the product of the marginals
        let mut joint = [[0u64; 2]; 2];
        for k in 0..n - 1 {
            joint[a.symbols()[k + 1] as usize][b.symbols()[k] as usize] += 1;
        }
        let total = (n - 1) as f64;
        for (i, row) in joint.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                let p = c as f64 / total;
                let marginal_a: f64 = joint[i].iter().sum::<u64>() as f64 / total;
                let marginal_b: f64 =
                    joint.iter().map(|r| r[j]).sum::<u64>() as f64 / total;
                assert!(
                    (p - marginal_a * marginal_b).abs() < 0.01,
                    "joint ({i},{j}) = {p}"
                );
            }
        }
    }

    #[test]
    fn follows_conditional_tables() {
        let spec = CoupledSystemSpec::skewed_binary_example();
        let n = 200_000;
        let (a, b) = simulate_coupled(&spec, n, 7).unwrap();
        // empirical Pr(a[k+1] = 0 | b[k] = 0)
        let (mut hits, mut total) = (0u64, 0u64);
        for k in 0..n - 1 {
            if b.symbols()[k] == 0 {
                total += 1;
                if a.symbols()[k + 1] == 0 {
                    hits += 1;
                }
            }
        }
        let p = hits as f64 / total as f64;
        assert!((p - 0.8).abs() < 0.01, "conditional estimate {p}");
    }
}
