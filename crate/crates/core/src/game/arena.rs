use std::fmt::Write;

/// Two-player max-parity game. A player who cannot move loses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParityGame {
    pub owner: Vec<u8>,
    pub priority: Vec<u32>,
    pub succ: Vec<Vec<usize>>,
    pub labels: Vec<String>,
    pub init: usize,
}

impl ParityGame {
    pub fn new() -> ParityGame {
        ParityGame::default()
    }

    pub fn add_node(&mut self, owner: u8, priority: u32, label: impl Into<String>) -> usize {
        assert!(owner < 2);
        self.owner.push(owner);
        self.priority.push(priority);
        self.succ.push(Vec::new());
        self.labels.push(label.into());
        self.owner.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        if !self.succ[from].contains(&to) {
            self.succ[from].push(to);
        }
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn max_priority(&self) -> u32 {
        self.priority.iter().copied().max().unwrap_or(0)
    }

    pub fn pred(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (v, s) in self.succ.iter().enumerate() {
            for &w in s {
                pred[w].push(v);
            }
        }
        pred
    }

    /// pgsolver text format.
    pub fn to_pgsolver(&self) -> String {
        let mut s = String::new();
        writeln!(s, "parity {};", self.len().saturating_sub(1)).unwrap();
        for v in 0..self.len() {
            let succ: Vec<String> = self.succ[v].iter().map(|w| w.to_string()).collect();
            let label = self.labels[v].replace('"', "'");
            writeln!(s, "{} {} {} {} \"{}\";", v, self.priority[v], self.owner[v], succ.join(","), label).unwrap();
        }
        s
    }
}

/// Positional strategy: chosen successor per position, where defined.
pub type Strategy = Vec<Option<usize>>;

/// Winner of every position plus a positional strategy for each winner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub winner: Vec<u8>,
    pub strategy: Strategy,
}

impl Solution {
    pub fn region(&self, player: u8) -> Vec<usize> {
        (0..self.winner.len()).filter(|&v| self.winner[v] == player).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgsolver_output() {
        let mut g = ParityGame::new();
        let a = g.add_node(0, 2, "S : q0");
        let b = g.add_node(1, 0, "{S : q0}");
        g.add_edge(a, b);
        g.add_edge(b, a);
        g.add_edge(b, a);
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.to_pgsolver(), "parity 1;\n0 2 0 1 \"S : q0\";\n1 0 1 0 \"{S : q0}\";\n");
    }
}
