use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact `B_0, ..., B_J` with `B_1 = -1/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliCache {
    values: Vec<BigRational>,
}

impl BernoulliCache {
    /// Runs `sum_{i=0}^{n} binom(n+1, i) B_i = 0` up to `n = max_index`.
    pub fn new(max_index: usize) -> Self {
        let mut values: Vec<BigRational> = Vec::with_capacity(max_index + 1);
        values.push(BigRational::one());
        // binom(n+1, i) for the current n, as a row of Pascal's triangle
        let mut row: Vec<BigInt> = vec![BigInt::one(), BigInt::one()];
        for n in 1..=max_index {
            let mut next = Vec::with_capacity(row.len() + 1);
            next.push(BigInt::one());
            for w in row.windows(2) {
                next.push(&w[0] + &w[1]);
            }
            next.push(BigInt::one());
            row = next;
            if n > 1 && n % 2 == 1 {
                values.push(BigRational::zero());
                continue;
            }
            let mut acc = BigRational::zero();
            for (i, b) in values.iter().enumerate() {
                if !b.is_zero() {
                    acc += b * BigRational::from_integer(row[i].clone());
                }
            }
            values.push(-acc / BigRational::from_integer(row[n].clone()));
        }
        Self { values }
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, j: usize) -> Option<&BigRational> {
        self.values.get(j)
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }
}

pub fn bernoulli(j: usize) -> BigRational {
    BernoulliCache::new(j).values[j].clone()
}
