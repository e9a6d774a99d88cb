//! Instances shipped with the crate.

use crate::check::Verdict;

/// A named instance with its expected verdict.
#[derive(Copy, Clone, Debug)]
pub struct Embedded {
    pub name: &'static str,
    pub hes: &'static str,
    pub lts: &'static str,
    pub expected: Verdict,
}

macro_rules! instance {
    ($dir:literal, $name:literal, $expected:expr) => {
        Embedded {
            name: $name,
            hes: include_str!(concat!("../../../corpus/", $dir, "/", $name, ".hes")),
            lts: include_str!(concat!("../../../corpus/", $dir, "/", $name, ".lts")),
            expected: $expected,
        }
    };
}

/// Small instances whose verdicts were fixed by the semantic oracle.
pub const GOLDEN: [Embedded; 6] = [
    instance!("golden", "ex3", Verdict::Valid),
    instance!("golden", "file-protocol", Verdict::Valid),
    instance!("golden", "ex3-no-c", Verdict::Invalid),
    instance!("golden", "mu-self", Verdict::Invalid),
    instance!("golden", "buchi", Verdict::Valid),
    instance!("golden", "repeat", Verdict::Valid),
];

/// Order-3 instances, beyond the reach of the oracle; verdicts by hand.
pub const ORDER3: [Embedded; 3] = [
    instance!("order3", "apply3", Verdict::Valid),
    instance!("order3", "pow2", Verdict::Valid),
    instance!("order3", "pow2-odd", Verdict::Invalid),
];

pub fn all() -> impl Iterator<Item = &'static Embedded> {
    GOLDEN.iter().chain(ORDER3.iter())
}
