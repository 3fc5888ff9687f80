use crate::error::{HsvdError, Result};

/// Per-block cursor `(ip, jp, iblk, jblk)`; `ip`/`jp` are auxiliary and
/// `(iblk, jblk)` is the pivot pair (in sorted-diagonal positions).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockCursor {
    pub ip: usize,
    pub jp: usize,
    pub iblk: usize,
    pub jblk: usize,
}

impl BlockCursor {
    pub fn pair(&self) -> (usize, usize) {
        (self.iblk, self.jblk)
    }
}

/// Modified modulus stepper over `r` columns and `b = r / 2` blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepperState {
    r: usize,
    blocks: Vec<BlockCursor>,
}

impl StepperState {
    /// Antidiagonal start: block `k` holds `(k, r - k - 1)`.
    pub fn new(r: usize) -> Result<Self> {
        if r < 2 || r % 2 != 0 {
            return Err(HsvdError::shape(format!(
                "modified modulus stepper needs an even column count >= 2, got {r}"
            )));
        }
        let blocks = (0..r / 2)
            .map(|k| BlockCursor {
                ip: k,
                jp: r - k - 1,
                iblk: k,
                jblk: r - k - 1,
            })
            .collect();
        Ok(Self { r, blocks })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[BlockCursor] {
        &self.blocks
    }

    pub fn pair(&self, k: usize) -> (usize, usize) {
        self.blocks[k].pair()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.blocks.iter().map(BlockCursor::pair).collect()
    }

    /// Moves block `k` to its next pivot pair.
    pub fn advance_block(&mut self, k: usize) {
        let r = self.r;
        let b = &mut self.blocks[k];
        if b.ip + b.jp >= r - 1 {
            b.ip += 1;
            if b.ip == b.jp {
                b.ip -= r / 2;
                b.jp = b.ip;
            }
            b.iblk = b.ip;
        } else {
            b.jp += 1;
            b.jblk = b.jp;
        }
    }

    pub fn advance(&mut self) {
        for k in 0..self.blocks.len() {
            self.advance_block(k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_is_antidiagonal() {
        let s = StepperState::new(8).unwrap();
        assert_eq!(s.pair(0), (0, 7));
        assert_eq!(s.pair(3), (3, 4));
        assert_eq!(StepperState::new(2).unwrap().pair(0), (0, 1));
    }

    #[test]
    fn init_rejects_odd_or_tiny() {
        assert!(StepperState::new(7).is_err());
        assert!(StepperState::new(0).is_err());
        assert!(StepperState::new(1).is_err());
    }

    #[test]
    fn block_three_sequence_for_eight_columns() {
        let mut s = StepperState::new(8).unwrap();
        let mut seen = Vec::new();
        for _ in 0..8 {
            seen.push(s.pair(3));
            s.advance_block(3);
        }
        assert_eq!(
            seen,
            vec![(3, 4), (0, 4), (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6)]
        );
    }

    #[test]
    fn second_step_for_eight_columns() {
        let mut s = StepperState::new(8).unwrap();
        s.advance();
        assert_eq!(s.pairs(), vec![(1, 7), (2, 6), (3, 5), (0, 4)]);
    }

    #[test]
    fn next_quasi_sweep_starts_reversed() {
        let mut s = StepperState::new(8).unwrap();
        for _ in 0..8 {
            s.advance();
        }
        assert_eq!(s.pairs(), vec![(3, 4), (2, 5), (1, 6), (0, 7)]);
    }
}
