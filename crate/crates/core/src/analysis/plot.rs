//! CSV export of density-matrix elements for bar-chart plotting.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::qstate::{da_label, hv_label, DensityMatrix, LocalUnitary};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PlotBasis {
    #[default]
    Hv,
    Da,
}

impl std::str::FromStr for PlotBasis {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hv" => Ok(PlotBasis::Hv),
            "da" => Ok(PlotBasis::Da),
            other => crate::error::invalid(format!("unknown plot basis '{other}' (expected hv or da)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct PlotRow<T: Real> {
    pub row: String,
    pub col: String,
    pub re: T,
    pub im: T,
    pub abs: T,
}

/// All `ρ_ij` in the chosen product basis, row-major.
pub fn plot_rows<T: Real>(rho: &DensityMatrix<T>, basis: PlotBasis) -> Result<Vec<PlotRow<T>>> {
    let n = rho.n_qubits();
    let (m, label): (DensityMatrix<T>, fn(usize, usize) -> String) = match basis {
        PlotBasis::Hv => (rho.clone(), hv_label),
        PlotBasis::Da => (rho.apply_all(LocalUnitary::hadamard().matrix()), da_label),
    };
    let dim = 1usize << n;
    let mat = m.matrix();
    let mut rows = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let z = mat[(i, j)];
            rows.push(PlotRow { row: label(i, n), col: label(j, n), re: z.re, im: z.im, abs: z.norm_sqr().sqrt() });
        }
    }
    Ok(rows)
}

/// Writes `row,col,re,im,abs` CSV.
pub fn write_plot_data<T: Real, W: Write>(writer: W, rho: &DensityMatrix<T>, basis: PlotBasis) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    for r in plot_rows(rho, basis)? {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}
