use std::fmt;

use crate::error::{Error, Result};

pub const BLANK: char = '_';

/// Transformations of a Turing tape.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TapeOp {
    Identity,
    /// Sequence shift `x_i -> x_{i+1}`: the head ends up reading the former cell 1.
    ShiftLeft,
    /// Sequence shift `x_i -> x_{i-1}`.
    ShiftRight,
    /// Overwrite cell 0.
    Write(char),
}

impl fmt::Display for TapeOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TapeOp::Identity => write!(f, "id"),
            TapeOp::ShiftLeft => write!(f, "left"),
            TapeOp::ShiftRight => write!(f, "right"),
            TapeOp::Write(c) => write!(f, "write:{c}"),
        }
    }
}

/// A two-way infinite tape with finitely many non-blank cells.
///
/// `left` and `right` are stacks whose tops (last elements) are the cells
/// adjacent to the head. Their bottoms are never blank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TapeConfig {
    left: Vec<char>,
    head: char,
    right: Vec<char>,
}

fn push(stack: &mut Vec<char>, c: char) {
    if !(stack.is_empty() && c == BLANK) {
        stack.push(c);
    }
}

impl Default for TapeConfig {
    fn default() -> Self {
        TapeConfig::blank()
    }
}

impl TapeConfig {
    pub fn blank() -> Self {
        TapeConfig {
            left: Vec::new(),
            head: BLANK,
            right: Vec::new(),
        }
    }

    /// `w` at cells `0..|w|` with the head on cell 0.
    pub fn from_word(w: &str) -> Self {
        let mut chars = w.chars();
        let head = chars.next().unwrap_or(BLANK);
        let mut right = Vec::new();
        for c in chars.rev() {
            push(&mut right, c);
        }
        TapeConfig {
            left: Vec::new(),
            head,
            right,
        }
    }

    /// Cells left of the head, the head cell and cells right of it, each read left to right.
    pub fn from_cells(left: &str, head: char, right: &str) -> Self {
        TapeConfig {
            left: left.trim_start_matches(BLANK).chars().collect(),
            head,
            right: right.trim_end_matches(BLANK).chars().rev().collect(),
        }
    }

    pub fn left_cells(&self) -> String {
        self.left.iter().collect()
    }

    pub fn right_cells(&self) -> String {
        self.right.iter().rev().collect()
    }

    pub fn head(&self) -> char {
        self.head
    }

    pub fn is_blank(&self) -> bool {
        self.head == BLANK && self.left.is_empty() && self.right.is_empty()
    }

    /// Symbol at offset `i` from the head.
    pub fn cell(&self, i: i64) -> char {
        match i {
            0 => self.head,
            i if i > 0 => {
                let k = i as usize;
                if k <= self.right.len() {
                    self.right[self.right.len() - k]
                } else {
                    BLANK
                }
            }
            i => {
                let k = i.unsigned_abs() as usize;
                if k <= self.left.len() {
                    self.left[self.left.len() - k]
                } else {
                    BLANK
                }
            }
        }
    }

    pub fn apply(&mut self, op: TapeOp) {
        match op {
            TapeOp::Identity => {}
            TapeOp::ShiftLeft => {
                push(&mut self.left, self.head);
                self.head = self.right.pop().unwrap_or(BLANK);
            }
            TapeOp::ShiftRight => {
                push(&mut self.right, self.head);
                self.head = self.left.pop().unwrap_or(BLANK);
            }
            TapeOp::Write(c) => self.head = c,
        }
    }

    pub fn applied(&self, op: TapeOp) -> Self {
        let mut t = self.clone();
        t.apply(op);
        t
    }

    /// Non-blank symbols from cell 1 up to the first blank.
    pub fn word_right_of_head(&self) -> String {
        self.right.iter().rev().take_while(|&&c| c != BLANK).collect()
    }

    /// The span between the outermost non-blank cells, blanks inside kept.
    pub fn contents(&self) -> String {
        let mut cells: Vec<char> = self.left.clone();
        cells.push(self.head);
        cells.extend(self.right.iter().rev());
        let s: String = cells.into_iter().collect();
        s.trim_matches(BLANK).to_string()
    }

    /// Cells `-radius..=radius` with the head cell bracketed.
    pub fn window(&self, radius: i64) -> String {
        let mut out = String::new();
        for i in -radius..=radius {
            if i == 0 {
                out.push('[');
                out.push(self.head);
                out.push(']');
            } else {
                out.push(self.cell(i));
            }
        }
        out
    }
}

impl fmt::Display for TapeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let left: String = self.left.iter().collect();
        let right: String = self.right.iter().rev().collect();
        write!(f, "{left}[{}]{right}", self.head)
    }
}

/// The input word written onto a blank tape.
pub fn encode_input(w: &str, alphabet: &[char]) -> Result<TapeConfig> {
    if let Some(symbol) = w.chars().find(|c| !alphabet.contains(c)) {
        return Err(Error::SymbolOutsideAlphabet { symbol });
    }
    Ok(TapeConfig::from_word(w))
}
