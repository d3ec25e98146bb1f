//! Report payloads for every subcommand, serialized as-is for `--json` and
//! rendered through small helpers for the human format. Field order is fixed
//! by the struct definitions, partitions are serialized as class lists
//! ordered by least element, so output bytes are stable across runs and
//! thread counts.

use serde::Serialize;

use ybe_core::algebra::UnaryMap;
use ybe_core::files::{AlgebraFile, SolutionFile};
use ybe_core::partition::Partition;
use ybe_core::permutational::KPermWitness;
use ybe_core::retraction::Mpl;
use ybe_core::solution::{Classification, IdentityChecks};

/// A partition as sorted class lists.
pub fn partition_classes(p: &Partition) -> Vec<Vec<usize>> {
    p.classes()
}

/// Human rendering: `{a,e} {b} {c,d}` using labels when present.
pub fn partition_display(p: &Partition, labels: Option<&[String]>) -> String {
    let name = |x: usize| match labels {
        Some(l) => l[x].clone(),
        None => x.to_string(),
    };
    p.classes()
        .iter()
        .map(|class| {
            let inner: Vec<String> = class.iter().map(|&x| name(x)).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Serialize)]
pub struct MplReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub irretractable_size: Option<usize>,
}

impl From<Mpl> for MplReport {
    fn from(m: Mpl) -> Self {
        match m {
            Mpl::Level(level) => MplReport {
                level: Some(level),
                irretractable_size: None,
            },
            Mpl::Irretractable { size } => MplReport {
                level: None,
                irretractable_size: Some(size),
            },
        }
    }
}

pub fn mpl_display(m: Mpl) -> String {
    match m {
        Mpl::Level(l) => format!("multipermutation level: {l}"),
        Mpl::Irretractable { size } => format!("irretractable, size {size}"),
    }
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub braid: bool,
    pub identities: IdentityChecks,
    pub classification: Classification,
}

#[derive(Serialize)]
pub struct InfoReport {
    pub n: usize,
    pub kind: &'static str,
    pub ops: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub braid: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
    pub sim_classes: usize,
    pub approx_classes: usize,
    pub mpl: MplReport,
}

#[derive(Serialize)]
pub struct RetractReport {
    pub n: usize,
    pub sim: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<Vec<Vec<usize>>>>,
    pub approx: Vec<Vec<usize>>,
    pub rounds: usize,
    pub tower_sizes: Vec<usize>,
    pub mpl: MplReport,
}

#[derive(Serialize)]
pub struct MplCommandReport {
    pub n: usize,
    pub tower_sizes: Vec<usize>,
    pub mpl: MplReport,
}

#[derive(Serialize)]
pub struct WitnessReport {
    pub levels: Vec<WitnessLevel>,
    pub args: Vec<usize>,
    pub y: usize,
    pub z: usize,
    pub omega_y: usize,
    pub omega_z: usize,
}

#[derive(Serialize)]
pub struct WitnessLevel {
    pub op: String,
    pub word: Vec<usize>,
}

impl WitnessReport {
    pub fn new(w: &KPermWitness, op_names: &[String]) -> Self {
        WitnessReport {
            levels: w
                .spec
                .levels
                .iter()
                .map(|l| WitnessLevel {
                    op: op_names[l.op].clone(),
                    word: l.word.image().to_vec(),
                })
                .collect(),
            args: w.args.clone(),
            y: w.y,
            z: w.z,
            omega_y: w.omega_y,
            omega_z: w.omega_z,
        }
    }
}

#[derive(Serialize)]
pub struct KPermReport {
    pub n: usize,
    pub k: usize,
    pub words: bool,
    pub monoid_size: usize,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
}

#[derive(Serialize)]
pub struct MonoidReport {
    pub n: usize,
    pub generator_count: usize,
    pub monoid_size: usize,
    pub generators: Vec<Vec<usize>>,
    pub contains_constants: Vec<usize>,
}

impl MonoidReport {
    pub fn new(n: usize, gens: &[UnaryMap], elements: &[UnaryMap]) -> Self {
        MonoidReport {
            n,
            generator_count: gens.len(),
            monoid_size: elements.len(),
            generators: gens.iter().map(|g| g.image().to_vec()).collect(),
            contains_constants: (0..n)
                .filter(|&v| elements.iter().any(|e| e.image().iter().all(|&x| x == v)))
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct EnumerateReport {
    pub n: usize,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter: Option<String>,
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub written: Option<String>,
}

#[derive(Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub property: String,
    pub limit: usize,
    pub found: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solutions: Option<Vec<SolutionFile>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub written: Option<String>,
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum QuotientPayload {
    Solution(SolutionFile),
    Algebra(AlgebraFile),
}

#[derive(Serialize)]
pub struct QuotientReport {
    pub n: usize,
    pub classes: Vec<Vec<usize>>,
    pub quotient_size: usize,
    pub quotient: QuotientPayload,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub written: Option<String>,
}
