//! Instance generators and file formats.

mod formats;
mod gen;

pub use formats::{
    read_dimacs, read_mps, read_ot, read_solution, write_dimacs, write_mps, write_ot, write_solution, Solution,
};
pub use gen::{
    degenerate_transport_lp, gen_mcf, gen_ot_from_images, gen_ot_points, gen_ot_random, gen_small_lp, gen_wb, generate,
    DegenerateLp, GenSpec, PointCloudOt, Raster, CAPACITY_RANGE, COST_RANGE,
};

use crate::error::{Error, Result};
use crate::model::{mcf_to_lp, ot_to_lp, McfProblem, OtProblem, StandardLp};

/// A problem in any of the supported input formats.
#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Mcf(McfProblem),
    Ot(OtProblem),
    Lp(StandardLp),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Dimacs,
    Ot,
    Mps,
    Solution,
}

impl Instance {
    pub fn to_lp(&self) -> Result<StandardLp> {
        match self {
            Instance::Mcf(p) => mcf_to_lp(p),
            Instance::Ot(p) => ot_to_lp(p),
            Instance::Lp(lp) => Ok(lp.clone()),
        }
    }

    pub fn write(&self) -> String {
        match self {
            Instance::Mcf(p) => write_dimacs(p),
            Instance::Ot(p) => write_ot(p),
            Instance::Lp(lp) => write_mps(lp, "lp"),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Mcf(_) => "mcf",
            Instance::Ot(_) => "ot",
            Instance::Lp(_) => "lp",
        }
    }
}

/// Guesses the format from the first meaningful line.
pub fn detect_format(text: &str) -> Result<Format> {
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('*') {
            continue;
        }
        let first = line.split_whitespace().next().unwrap_or("");
        return match first {
            "c" | "p" => Ok(Format::Dimacs),
            "ot" => Ok(Format::Ot),
            "NAME" | "ROWS" => Ok(Format::Mps),
            "status" => Ok(Format::Solution),
            other => Err(Error::parse(i + 1, format!("cannot infer the format from `{other}`"))),
        };
    }
    Err(Error::parse(1, "empty input"))
}

/// Reads a problem in any supported format.
pub fn read_instance(text: &str) -> Result<Instance> {
    match detect_format(text)? {
        Format::Dimacs => read_dimacs(text).map(Instance::Mcf),
        Format::Ot => read_ot(text).map(Instance::Ot),
        Format::Mps => read_mps(text).map(Instance::Lp),
        Format::Solution => Err(Error::parse(1, "expected a problem, found a solution")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_formats() {
        assert_eq!(detect_format("c x\np min 1 0\n").unwrap(), Format::Dimacs);
        assert_eq!(detect_format("# x\n\not 1 1\n").unwrap(), Format::Ot);
        assert_eq!(detect_format("* x\nNAME y\n").unwrap(), Format::Mps);
        assert_eq!(detect_format("status optimal\n").unwrap(), Format::Solution);
        assert!(detect_format("hello").is_err());
        assert!(detect_format("").is_err());
    }

    #[test]
    fn instance_round_trip() {
        let inst = Instance::Mcf(gen_mcf(6, 10, 1).unwrap());
        assert_eq!(read_instance(&inst.write()).unwrap(), inst);
    }
}
