use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::algebra::{basis_digest, Algebra, AlgebraId};
use crate::exactla::write_triplets;

use super::complex::MvComplex;
use super::MvError;

/// On-disk description of an exported complex. The manifest lists every
/// summand with its dimension and column offset, and one plain-text triplet
/// file per differential. Matrix indices refer to the canonical basis
/// enumeration, pinned by `basis_digest`.
#[derive(Clone, Debug, Serialize)]
pub struct ExportManifest {
    pub algebra: AlgebraId,
    pub basis_digest: String,
    pub ideals: Vec<String>,
    pub width: u8,
    pub built_to: u8,
    pub quotient_dim: usize,
    pub dims: Vec<usize>,
    pub degrees: Vec<DegreeManifest>,
    pub matrices: Vec<MatrixManifest>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeManifest {
    pub p: u8,
    pub dim: usize,
    pub summands: Vec<SummandManifest>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SummandManifest {
    pub ideals: Vec<String>,
    pub dim: usize,
    pub offset: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixManifest {
    pub file: String,
    pub maps: String,
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
}

/// Writes `manifest.json` plus one triplet file per differential into `dir`
/// (created if missing). Output bytes are a pure function of the complex, so
/// re-exporting the same input reproduces identical files.
pub fn export_complex(
    alg: &Algebra,
    cx: &MvComplex,
    dir: &Path,
) -> Result<ExportManifest, MvError> {
    if alg.id() != cx.descriptor().algebra {
        return Err(MvError::BadDecomposition(format!(
            "complex was built for {}, got algebra {}",
            cx.descriptor().algebra,
            alg.id()
        )));
    }
    fs::create_dir_all(dir)?;

    let digest = basis_digest(alg)
        .map_err(|e| MvError::BadDecomposition(format!("basis digest: {e}")))?;
    let digest_hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();

    let mut degrees = Vec::new();
    for p in 0..=cx.built_to() {
        let summands = cx
            .summands(p)
            .iter()
            .map(|s| SummandManifest {
                ideals: s
                    .labels()
                    .iter()
                    .map(|&l| cx.descriptor().ideals[l as usize].to_string())
                    .collect(),
                dim: s.dim(),
                offset: s.offset(),
            })
            .collect();
        degrees.push(DegreeManifest {
            p,
            dim: cx.dims()[p as usize + 1],
            summands,
        });
    }

    let mut matrices = Vec::new();
    for (i, d) in cx.differentials().iter().enumerate() {
        let (file, maps) = if i == 0 {
            ("projection.triplets".to_string(), "degree 0 to quotient".to_string())
        } else {
            (format!("d{i}.triplets"), format!("degree {i} to degree {}", i - 1))
        };
        let mut w = BufWriter::new(fs::File::create(dir.join(&file))?);
        write_triplets(d, &mut w)?;
        w.flush()?;
        matrices.push(MatrixManifest {
            file,
            maps,
            rows: d.rows(),
            cols: d.cols(),
            nnz: d.nnz(),
        });
    }

    let manifest = ExportManifest {
        algebra: alg.id(),
        basis_digest: digest_hex,
        ideals: cx.descriptor().ideals.iter().map(|t| t.to_string()).collect(),
        width: cx.width(),
        built_to: cx.built_to(),
        quotient_dim: cx.quotient_dim(),
        dims: cx.dims().to_vec(),
        degrees,
        matrices,
    };
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    fs::write(dir.join("manifest.json"), json)?;
    Ok(manifest)
}
