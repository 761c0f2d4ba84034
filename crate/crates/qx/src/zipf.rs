//! Rank-frequency tables, power-law fitting in log-log space, and
//! coverage-driven inventory size estimates.

use std::collections::HashMap;

use thiserror::Error;

use crate::token::Token;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZipfError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("need at least 2 ranks to fit, have {0}")]
    TooFewRanks(usize),
    #[error("rank {k} out of range 1..={n}")]
    RankOutOfRange { k: usize, n: usize },
    #[error("coverage target {0} is unreachable (must be in (0, 1])")]
    UnreachableTarget(f64),
}

/// Items ranked by frequency: rank 1 is the most frequent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTable {
    entries: Vec<(usize, Token, u64)>,
    total: u64,
}

impl RankTable {
    /// Builds a table from (item, frequency) counts. Ties are broken by the
    /// order items appear in the input slice.
    pub fn from_counts(counts: Vec<(Token, u64)>) -> Result<Self, ZipfError> {
        if counts.is_empty() {
            return Err(ZipfError::EmptyCorpus);
        }
        let mut indexed: Vec<(usize, Token, u64)> = counts
            .into_iter()
            .enumerate()
            .map(|(i, (t, f))| (i, t, f))
            .collect();
        indexed.sort_by(|a, b| b.2.cmp(&a.2).then(a.0.cmp(&b.0)));
        let total = indexed.iter().map(|e| e.2).sum();
        let entries = indexed
            .into_iter()
            .enumerate()
            .map(|(i, (_, t, f))| (i + 1, t, f))
            .collect();
        Ok(RankTable { entries, total })
    }

    pub fn entries(&self) -> &[(usize, Token, u64)] {
        &self.entries
    }

    pub fn n_ranks(&self) -> usize {
        self.entries.len()
    }

    pub fn total_frequency(&self) -> u64 {
        self.total
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (rank, item, freq) in &self.entries {
            out.push_str(&format!("{rank}\t{item}\t{freq}\n"));
        }
        out
    }
}

fn count_map_to_table(counts: HashMap<Token, (u64, usize)>) -> Result<RankTable, ZipfError> {
    // first-occurrence index keeps tie-breaking deterministic
    let mut pairs: Vec<(usize, Token, u64)> = counts
        .into_iter()
        .map(|(t, (f, first))| (first, t, f))
        .collect();
    pairs.sort_by_key(|a| a.0);
    RankTable::from_counts(pairs.into_iter().map(|(_, t, f)| (t, f)).collect())
}

/// Counts token frequencies and ranks them; ties broken by first occurrence
/// in the corpus.
#[cfg(feature = "parallel")]
pub fn rank_frequency(corpus: &[Token]) -> Result<RankTable, ZipfError> {
    use rayon::prelude::*;
    if corpus.is_empty() {
        return Err(ZipfError::EmptyCorpus);
    }
    let counts = corpus
        .par_iter()
        .enumerate()
        .fold(
            HashMap::<Token, (u64, usize)>::new,
            |mut acc, (idx, tok)| {
                let e = acc.entry(tok.clone()).or_insert((0, idx));
                e.0 += 1;
                e.1 = e.1.min(idx);
                acc
            },
        )
        .reduce(HashMap::new, |mut a, b| {
            for (tok, (f, first)) in b {
                let e = a.entry(tok).or_insert((0, first));
                e.0 += f;
                e.1 = e.1.min(first);
            }
            a
        });
    count_map_to_table(counts)
}

#[cfg(not(feature = "parallel"))]
pub fn rank_frequency(corpus: &[Token]) -> Result<RankTable, ZipfError> {
    rank_frequency_serial(corpus)
}

/// Single-threaded counting; same table as [`rank_frequency`].
pub fn rank_frequency_serial(corpus: &[Token]) -> Result<RankTable, ZipfError> {
    if corpus.is_empty() {
        return Err(ZipfError::EmptyCorpus);
    }
    let mut counts: HashMap<Token, (u64, usize)> = HashMap::new();
    for (idx, tok) in corpus.iter().enumerate() {
        let e = counts.entry(tok.clone()).or_insert((0, idx));
        e.0 += 1;
    }
    count_map_to_table(counts)
}

/// Least-squares fit of frequency = C * rank^(-s) in log-log space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZipfFit {
    /// The slope s in frequency proportional to rank^(-s).
    pub exponent: f64,
    /// C in f = C * r^(-s).
    pub constant: f64,
    /// Root-mean-square residual in log-log space.
    pub residual: f64,
    pub n_ranks: usize,
}

/// Fits (rank, frequency) points with frequency allowed to be real-valued.
pub fn fit_zipf_points(points: &[(f64, f64)]) -> Result<ZipfFit, ZipfError> {
    if points.len() < 2 {
        return Err(ZipfError::TooFewRanks(points.len()));
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|(r, f)| (r.ln(), f.ln())).collect();
    let mean_x: f64 = logs.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y: f64 = logs.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = logs
        .iter()
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    Ok(ZipfFit {
        exponent: -slope,
        constant: intercept.exp(),
        residual: (sse / n).sqrt(),
        n_ranks: points.len(),
    })
}

/// Fits the table's integer frequencies.
pub fn fit_zipf(t: &RankTable) -> Result<ZipfFit, ZipfError> {
    let points: Vec<(f64, f64)> = t
        .entries()
        .iter()
        .map(|(r, _, f)| (*r as f64, *f as f64))
        .collect();
    fit_zipf_points(&points)
}

/// Fraction of total frequency mass covered by the top-k ranks.
pub fn coverage(t: &RankTable, k: usize) -> Result<f64, ZipfError> {
    let n = t.n_ranks();
    if k == 0 || k > n {
        return Err(ZipfError::RankOutOfRange { k, n });
    }
    let head: u64 = t.entries()[..k].iter().map(|e| e.2).sum();
    Ok(head as f64 / t.total_frequency() as f64)
}

/// Smallest k whose coverage reaches the target.
pub fn required_rank(t: &RankTable, target: f64) -> Result<usize, ZipfError> {
    if !(target > 0.0 && target <= 1.0) {
        return Err(ZipfError::UnreachableTarget(target));
    }
    let total = t.total_frequency() as f64;
    let mut head: u64 = 0;
    for (rank, _, freq) in t.entries() {
        head += freq;
        if head as f64 / total >= target {
            return Ok(*rank);
        }
    }
    Ok(t.n_ranks())
}

/// Smallest k such that the generalized-harmonic mass of the top k ranks,
/// out of `universe` items following an idealized rank^(-exponent)
/// distribution, reaches the target. A synthetic required_rank that needs
/// no corpus.
pub fn estimate_constructions(universe: usize, target: f64, exponent: f64) -> usize {
    assert!(universe >= 1, "universe must be at least 1");
    assert!(target > 0.0 && target <= 1.0, "target must be in (0, 1]");
    assert!(exponent >= 0.0, "exponent must be nonnegative");
    let total: f64 = (1..=universe).map(|r| (r as f64).powf(-exponent)).sum();
    let mut head = 0.0;
    for k in 1..=universe {
        head += (k as f64).powf(-exponent);
        if head / total >= target {
            return k;
        }
    }
    universe
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::token;

    fn corpus(s: &str) -> Vec<Token> {
        token::split(s).unwrap()
    }

    #[test]
    fn rank_frequency_counts_and_orders() {
        let t = rank_frequency(&corpus("a a b")).unwrap();
        assert_eq!(t.entries()[0], (1, Token::new("a").unwrap(), 2));
        assert_eq!(t.entries()[1], (2, Token::new("b").unwrap(), 1));
        assert_eq!(t.total_frequency(), 3);
    }

    #[test]
    fn ties_break_by_first_occurrence() {
        let t = rank_frequency(&corpus("c b a")).unwrap();
        let items: Vec<&str> = t.entries().iter().map(|(_, i, _)| i.as_str()).collect();
        assert_eq!(items, ["c", "b", "a"]);
        assert_eq!(
            rank_frequency_serial(&corpus("c b a")).unwrap().entries(),
            t.entries()
        );
    }

    #[test]
    fn rounded_zipf_generator_round_trips() {
        let counts: Vec<(Token, u64)> = (1..=50)
            .map(|r| {
                (
                    Token::new(&format!("w{r}")).unwrap(),
                    (1000.0 / r as f64).round() as u64,
                )
            })
            .collect();
        let t = RankTable::from_counts(counts).unwrap();
        for (rank, _, freq) in t.entries() {
            assert_eq!(*freq, (1000.0 / *rank as f64).round() as u64);
        }
    }

    #[test]
    fn fit_recovers_exact_law() {
        let points: Vec<(f64, f64)> = (1..=100)
            .map(|r| (r as f64, 1000.0 * (r as f64).powf(-1.0)))
            .collect();
        let fit = fit_zipf_points(&points).unwrap();
        assert!((fit.exponent - 1.0).abs() < 1e-9);
        assert!((fit.constant - 1000.0).abs() < 1e-6);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn fit_uniform_is_flat() {
        let counts: Vec<(Token, u64)> = (0..20)
            .map(|i| (Token::new(&format!("w{i}")).unwrap(), 7))
            .collect();
        let t = RankTable::from_counts(counts).unwrap();
        let fit = fit_zipf(&t).unwrap();
        assert!(fit.exponent.abs() < 1e-3);
    }

    #[test]
    fn fit_needs_two_ranks() {
        let t = RankTable::from_counts(vec![(Token::new("a").unwrap(), 3)]).unwrap();
        assert_eq!(fit_zipf(&t), Err(ZipfError::TooFewRanks(1)));
    }

    #[test]
    fn coverage_harmonic_example() {
        // exact s=1 Zipf with integer frequencies: C = lcm(1..=30)
        let c: u64 = 2_329_089_562_800;
        let counts: Vec<(Token, u64)> = (1..=30)
            .map(|r| (Token::new(&format!("w{r}")).unwrap(), c / r as u64))
            .collect();
        let t = RankTable::from_counts(counts).unwrap();
        let h5: f64 = (1..=5).map(|r| 1.0 / r as f64).sum();
        let h30: f64 = (1..=30).map(|r| 1.0 / r as f64).sum();
        assert!((coverage(&t, 5).unwrap() - h5 / h30).abs() < 1e-12);
        assert_eq!(coverage(&t, 30).unwrap(), 1.0);
        assert_eq!(required_rank(&t, 0.55).unwrap(), 5);
    }

    #[test]
    fn coverage_simple() {
        let t = RankTable::from_counts(vec![
            (Token::new("a").unwrap(), 2),
            (Token::new("b").unwrap(), 1),
        ])
        .unwrap();
        assert!((coverage(&t, 1).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!(coverage(&t, 0).is_err());
        assert!(coverage(&t, 3).is_err());
        assert_eq!(required_rank(&t, 1.0).unwrap(), 2);
        assert!(required_rank(&t, 1.5).is_err());
    }

    #[test]
    fn construction_estimates() {
        assert_eq!(estimate_constructions(30, 0.57, 1.0), 5);
        assert_eq!(estimate_constructions(30, 0.5, 0.0), 15);
        // the scheduling-domain "2 of 24 constructions with 'at'" ratio
        assert_eq!(estimate_constructions(24, 0.39, 1.0), 2);
    }
}
