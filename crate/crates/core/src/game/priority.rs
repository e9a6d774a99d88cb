use crate::syntax::{Hes, Sign};

/// `Ω_j` per equation, computed bottom-up.
pub fn priorities(hes: &Hes) -> Vec<u32> {
    signs_to_priorities(&hes.equations().iter().map(|e| e.sign).collect::<Vec<_>>())
}

pub fn signs_to_priorities(signs: &[Sign]) -> Vec<u32> {
    let n = signs.len();
    let mut out = vec![0; n];
    for i in (0..n).rev() {
        out[i] = if i + 1 == n {
            match signs[i] {
                Sign::Nu => 0,
                Sign::Mu => 1,
            }
        } else if signs[i] == signs[i + 1] {
            out[i + 1]
        } else {
            out[i + 1] + 1
        };
    }
    out
}
