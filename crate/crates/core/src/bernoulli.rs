//! Exact Bernoulli numbers and per-mode rounded coefficient tables.
//!
//! The asymptotic tails used by [`crate::special`] need `B_2 .. B_60`.
//! They are generated once as exact rationals by the defining recurrence
//! `sum_{j=0}^{m} C(m+1, j) B_j = 0` (with `B_1 = -1/2`), then rounded a
//! single time into each requested [`PrecisionMode`]. Rounding once keeps
//! evaluations bit-reproducible across calls.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use rug::{Integer, Rational};

use crate::real::{PrecisionMode, Real};

/// Largest index held by the exact table.
pub const MAX_BERNOULLI: u32 = 60;

static EXACT: LazyLock<Vec<Rational>> = LazyLock::new(|| {
    let n = MAX_BERNOULLI as usize;
    let mut table: Vec<Rational> = Vec::with_capacity(n + 1);
    table.push(Rational::from(1));
    for m in 1..=n {
        let mut acc = Rational::new();
        for (j, bj) in table.iter().enumerate() {
            let c = Integer::from(m as u32 + 1).binomial(j as u32);
            let mut term = bj.clone();
            term *= c;
            acc += term;
        }
        acc /= -(m as i32) - 1;
        table.push(acc);
    }
    table
});

/// Exact `B_n` for `0 <= n <= 60`.
pub fn bernoulli_exact(n: u32) -> &'static Rational {
    assert!(n <= MAX_BERNOULLI, "Bernoulli index {n} out of table range");
    &EXACT[n as usize]
}

type Table = Arc<Vec<Real>>;

static ROUNDED: LazyLock<Mutex<HashMap<PrecisionMode, Table>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// `[B_2, B_4, ..., B_60]` rounded once into `mode` (30 entries).
pub fn bernoulli_even_reals(mode: PrecisionMode) -> Table {
    let mut cache = ROUNDED.lock().unwrap();
    cache
        .entry(mode)
        .or_insert_with(|| {
            Arc::new(
                (1..=MAX_BERNOULLI / 2)
                    .map(|k| mode.from_rational(bernoulli_exact(2 * k)))
                    .collect(),
            )
        })
        .clone()
}
