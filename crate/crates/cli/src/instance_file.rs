//! On-disk JSON description of a displacement instance.
//!
//! Numbers are written in shortest round-trip decimal, so
//! parse(serialize(x)) reproduces every double exactly.

use serde::{Deserialize, Serialize};

use qsvand::displacement::DisplacementInstance;
use qsvand::{DenseMatrix, NodeSet, PolyFamily, PolySystem};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema_version: u32,
    pub family: String,
    pub n: usize,
    pub tau0: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub delta: Vec<f64>,
    pub theta: Vec<f64>,
    pub nodes: Vec<f64>,
    pub alpha_rank: usize,
    /// Left generator, row-major `n x alpha_rank`.
    #[serde(rename = "G")]
    pub g: Vec<f64>,
    /// Right generator, row-major `alpha_rank x n`.
    #[serde(rename = "B")]
    pub b: Vec<f64>,
}

pub fn parse_family(s: &str) -> Result<PolyFamily, CliError> {
    match s {
        "qs" | "quasiseparable" => Ok(PolyFamily::Quasiseparable),
        "ss" | "semiseparable" => Ok(PolyFamily::Semiseparable),
        "wf" | "well_free" | "well-free" => Ok(PolyFamily::WellFree),
        other => Err(CliError::Input(format!(
            "unknown family {other:?} (expected qs, ss, or wf)"
        ))),
    }
}

impl InstanceFile {
    pub fn from_instance(inst: &DisplacementInstance) -> Self {
        let sys = &inst.system;
        Self {
            schema_version: SCHEMA_VERSION,
            family: sys.family().name().to_string(),
            n: sys.n(),
            tau0: sys.tau0(),
            alpha: sys.alpha().to_vec(),
            beta: sys.beta().to_vec(),
            gamma: sys.gamma().to_vec(),
            delta: sys.delta().to_vec(),
            theta: sys.theta().to_vec(),
            nodes: inst.nodes.as_slice().to_vec(),
            alpha_rank: inst.alpha_rank(),
            g: inst.g.as_slice().to_vec(),
            b: inst.b.as_slice().to_vec(),
        }
    }

    pub fn into_instance(self) -> Result<DisplacementInstance, CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Input(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let family = parse_family(&self.family)?;
        let sys = PolySystem::new(
            family, self.n, self.tau0, self.alpha, self.beta, self.gamma, self.delta, self.theta,
        )?;
        let nodes = NodeSet::new(self.nodes)?;
        let expect = |name: &str, got: usize, want: usize| {
            if got == want {
                Ok(())
            } else {
                Err(CliError::Input(format!(
                    "{name} has {got} entries, expected {want}"
                )))
            }
        };
        expect("G", self.g.len(), self.n * self.alpha_rank)?;
        expect("B", self.b.len(), self.alpha_rank * self.n)?;
        let g = DenseMatrix::from_row_major(self.n, self.alpha_rank, self.g);
        let b = DenseMatrix::from_row_major(self.alpha_rank, self.n, self.b);
        Ok(DisplacementInstance::new(sys, nodes, g, b)?)
    }
}

pub fn read_instance(path: &std::path::Path) -> Result<DisplacementInstance, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let file: InstanceFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("cannot parse {}: {e}", path.display())))?;
    file.into_instance()
}

pub fn write_instance(path: &std::path::Path, inst: &DisplacementInstance) -> Result<(), CliError> {
    let file = InstanceFile::from_instance(inst);
    let text = serde_json::to_string_pretty(&file)
        .map_err(|e| CliError::Input(format!("serialization failed: {e}")))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}
