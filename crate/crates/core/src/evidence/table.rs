//! Classical tests of independence for a 2×2 contingency table.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableStats {
    pub chi2: f64,
    pub chi2_pvalue: f64,
    pub g2: f64,
    pub g2_pvalue: f64,
}

/// Pearson's χ² and the likelihood-ratio G², each with its χ²₁ p-value, for
/// the table `[[n11, n12], [n21, n22]]`.
pub fn table_stats(table: [[usize; 2]; 2]) -> Result<TableStats> {
    let n: f64 = table.iter().flatten().map(|&x| x as f64).sum();
    let rows = [0, 1].map(|i| (table[i][0] + table[i][1]) as f64);
    let cols = [0, 1].map(|j| (table[0][j] + table[1][j]) as f64);
    if rows.contains(&0.0) || cols.contains(&0.0) {
        return Err(Error::ZeroMargin);
    }
    let (mut chi2, mut g2) = (0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            let expected = rows[i] * cols[j] / n;
            let observed = table[i][j] as f64;
            chi2 += (observed - expected).powi(2) / expected;
            if observed > 0.0 {
                g2 += 2.0 * observed * (observed / expected).ln();
            }
        }
    }
    let dist = ChiSquared::new(1.0).expect("one degree of freedom");
    Ok(TableStats {
        chi2,
        chi2_pvalue: dist.sf(chi2),
        g2,
        g2_pvalue: dist.sf(g2),
    })
}
