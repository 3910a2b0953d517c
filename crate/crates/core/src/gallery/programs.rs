use crate::advice::ceil_c_log2;
use crate::error::{Error, Result};
use crate::machine::{Action, Element, PartitionRef, Program, Rule, TapeOp, BLANK};
use crate::numerics::Rational;

const ACCEPT: &str = "accept";
const REJECT: &str = "reject";
/// Head one cell to the right.
const RIGHT: TapeOp = TapeOp::ShiftLeft;
/// Head one cell to the left.
const LEFT: TapeOp = TapeOp::ShiftRight;

pub const MAX_DIGITS: usize = 1_000_000;
pub const MAX_SEARCH_DIGITS: usize = 24;

struct Builder {
    states: Vec<String>,
    rules: Vec<Rule>,
}

impl Builder {
    fn new(initial: &str) -> Self {
        Builder {
            states: vec![initial.to_string(), ACCEPT.to_string(), REJECT.to_string()],
            rules: Vec::new(),
        }
    }

    fn note(&mut self, s: &str) {
        if !self.states.iter().any(|t| t == s) {
            self.states.push(s.to_string());
        }
    }

    fn tape(&mut self, from: &str, symbols: &str, to: &str, op: TapeOp) {
        self.note(from);
        self.note(to);
        for c in symbols.chars() {
            self.rules.push(Rule::on_tape(from, c, to, op));
        }
    }

    fn tape_action(&mut self, from: &str, symbols: &str, to: &str, action: Action) {
        self.note(from);
        self.note(to);
        for c in symbols.chars() {
            self.rules
                .push(Rule::new(from, PartitionRef::Tape, Element::symbol(c), to, action.clone()));
        }
    }

    fn measured(&mut self, from: &str, partition: &str, element: Element, to: &str, action: Action) {
        self.note(from);
        self.note(to);
        self.rules
            .push(Rule::new(from, PartitionRef::System(partition.into()), element, to, action));
    }

    fn finish(self, name: String, initial: &str, alphabet: &[char]) -> Program {
        Program {
            name,
            states: self.states,
            initial: initial.to_string(),
            accept: ACCEPT.into(),
            reject: REJECT.into(),
            alphabet: alphabet.to_vec(),
            rules: self.rules,
        }
    }
}

fn transform(name: &str) -> Action {
    Action::Transform(name.into())
}

/// Reads `n` binary digits of the starting point of `CPhi`: measure, record, shift, step right.
pub fn extract_binary_digits(n: usize) -> Result<Program> {
    if n == 0 || n > MAX_DIGITS {
        return Err(Error::InvalidParameter(format!("digit count {n} outside 1..={MAX_DIGITS}")));
    }
    let mut b = Builder::new("m1");
    for i in 1..=n {
        let (m, w, r) = (format!("m{i}"), format!("w{i}"), format!("r{i}"));
        let next = if i == n { ACCEPT.to_string() } else { w.clone() };
        for (label, digit) in [("lo", '0'), ("hi", '1')] {
            b.measured(&m, "alpha", Element::label(label), &next, Action::Tape(TapeOp::Write(digit)));
        }
        if i < n {
            b.tape_action(&w, "01", &r, transform("T"));
            b.tape(&r, "01", &format!("m{}", i + 1), RIGHT);
        }
    }
    Ok(b.finish(format!("extract-binary-digits-{n}"), "m1", &['0', '1']))
}

/// Recovers `m` advice symbols from `CG`. Each symbol trit is measured and
/// shifted away; the digit is written while the following `2` is being measured.
pub fn extract_ternary_advice(m: usize) -> Result<Program> {
    if m == 0 || m > MAX_DIGITS {
        return Err(Error::InvalidParameter(format!("symbol count {m} outside 1..={MAX_DIGITS}")));
    }
    let mut b = Builder::new("a1");
    let blank = BLANK.to_string();
    for i in 1..=m {
        let (a, wait_a) = (format!("a{i}"), format!("A{i}"));
        let next = if i == m { ACCEPT.to_string() } else { format!("a{}", i + 1) };
        b.tape_action(&a, &blank, &wait_a, Action::Measure("alpha".into()));
        b.measured(&wait_a, "alpha", Element::Empty, &wait_a, Action::Tape(TapeOp::Identity));
        for d in ['0', '1'] {
            let (commence, write, step, wait) =
                (format!("b{d}_{i}"), format!("W{d}_{i}"), format!("S{d}_{i}"), format!("B{i}"));
            b.measured(&wait_a, "alpha", Element::label(format!("t{d}")), &commence, transform("T"));
            b.tape_action(&commence, &blank, &write, Action::Measure("alpha".into()));
            b.measured(&write, "alpha", Element::Empty, &step, Action::Tape(TapeOp::Write(d)));
            b.measured(&step, "alpha", Element::Empty, &wait, Action::Tape(RIGHT));
        }
        let wait_b = format!("B{i}");
        b.measured(&wait_b, "alpha", Element::Empty, &wait_b, Action::Tape(TapeOp::Identity));
        b.measured(&wait_b, "alpha", Element::label("t2"), &next, transform("T"));
    }
    Ok(b.finish(format!("extract-ternary-advice-{m}"), "a1", &['0', '1']))
}

/// Steps from commencing a measurement at `#` to the poll that follows a
/// `b`-bit counter overflowing, as seen by the interpreter's clock.
pub fn counter_wait(b: u32) -> u64 {
    6 * (1u64 << b) - 3 - u64::from(b)
}

/// Counter width for round `l`: the smallest whose wait reaches `2^(l + 1 + patience)`.
pub fn counter_bits(l: usize, patience: u32) -> u32 {
    let need = 1u64 << (l as u32 + 1 + patience);
    (0..).find(|&b| counter_wait(b) >= need).expect("wait grows without bound")
}

/// Tape symbols used by the timing search besides the input alphabet.
const SEARCH_ALPHABET: [char; 6] = ['0', '1', '#', 'c', 'd', 'x'];

/// States of the timing search for `L` digits, entered with the head on a blank
/// cell that has only blanks to its right and at least the final counter width
/// of blank or `x` cells to its left. Leaves the head on the last digit and
/// enters `exit`. Tape: counter (MSB left, `c`/`d` bits), `#`, digits.
fn search_fragment(b: &mut Builder, tag: &str, entry: &str, exit: &str, l_max: usize, patience: u32) {
    let bits: Vec<u32> = (0..=l_max).map(|l| counter_bits(l, patience)).collect();
    let st = |name: &str, l: usize| format!("{tag}{name}{l}");

    // write '#', then the initial counter to its left, then return to '#'
    b.tape(entry, "_", &st("init", 0), TapeOp::Write('#'));
    let mut cur = st("init", 0);
    for k in 0..bits[0] {
        let (mv, wr) = (st("initmv", k as usize), st("initwr", k as usize));
        b.tape(&cur, "#c_x", &mv, LEFT);
        b.tape(&mv, "_x", &wr, TapeOp::Write('c'));
        cur = wr;
    }
    if bits[0] > 0 {
        let back = st("initback", 0);
        b.tape(&cur, "c", &back, RIGHT);
        b.tape(&back, "c", &back, RIGHT);
        cur = back;
    }
    // head on '#': round 0 has no digits to apply and the point is already 1/2
    b.tape_action(&cur, "#", &st("W", 0), Action::Measure("alpha".into()));

    for l in 0..l_max {
        if l > 0 {
            // head on a_l: reset, then apply T_{a_l} .. T_{a_1}
            b.tape_action(&st("R", l), "01", &st("B", l), transform("R"));
            b.tape_action(&st("B", l), "0", &st("Bm", l), transform("T0"));
            b.tape_action(&st("B", l), "1", &st("Bm", l), transform("T1"));
            b.tape(&st("Bm", l), "01", &st("B", l), LEFT);
            b.tape_action(&st("B", l), "#", &st("W", l), Action::Measure("alpha".into()));
        }
        let (w, inc, carry, back, poll) = (st("W", l), st("I", l), st("Ic", l), st("Ib", l), st("P", l));
        b.measured(&w, "alpha", Element::Empty, &inc, Action::Tape(LEFT));
        b.tape(&inc, "d", &carry, TapeOp::Write('c'));
        b.tape(&inc, "c", &back, TapeOp::Write('d'));
        b.tape(&inc, "_x", &poll, TapeOp::Identity);
        b.tape(&carry, "c", &inc, LEFT);
        b.tape(&back, "cd", &back, RIGHT);
        b.tape(&back, "#", &inc, LEFT);

        // the poll sits on the cell left of the counter
        let grow = bits[l + 1] - bits[l];
        let (ext, to_end) = (st("E", l), st("End", l));
        let first = if grow == 0 { TapeOp::ShiftLeft } else { TapeOp::Write('c') };
        for (element, digit) in [(Element::Empty, '1'), (Element::label("low"), '1'), (Element::label("high"), '0')] {
            let target = format!("{to_end}_{digit}");
            let via = if grow > 1 { format!("{ext}_{digit}_1") } else { target.clone() };
            b.measured(&poll, "alpha", element, &via, Action::Tape(first));
            for k in 1..grow {
                let here = format!("{ext}_{digit}_{k}");
                let wr = format!("{ext}_{digit}_{k}w");
                let next = if k + 1 < grow { format!("{ext}_{digit}_{}", k + 1) } else { target.clone() };
                b.tape(&here, "c", &wr, LEFT);
                b.tape(&wr, "_x", &next, TapeOp::Write('c'));
            }
            let after = if l + 1 == l_max { exit.to_string() } else { st("R", l + 1) };
            b.tape(&target, "cd#01", &target, RIGHT);
            b.tape(&target, "_", &after, TapeOp::Write(digit));
        }
    }
}

/// Binary search for the first `L` digits of the boundary point of `DG`,
/// concluding from the measurement output or from a timeout. The counter is
/// erased at the end so that only the digits remain.
pub fn timing_binary_search(l: usize, patience: u32) -> Result<Program> {
    if l == 0 || l > MAX_SEARCH_DIGITS {
        return Err(Error::InvalidParameter(format!("digit count {l} outside 1..={MAX_SEARCH_DIGITS}")));
    }
    if patience > 16 {
        return Err(Error::InvalidParameter(format!("patience {patience} exceeds 16")));
    }
    let mut b = Builder::new("start");
    search_fragment(&mut b, "", "start", "clean", l, patience);
    b.tape("clean", "01", "clean", LEFT);
    b.tape("clean", "#", "erase", TapeOp::Write(BLANK));
    b.tape("erase", "_", "erase-next", LEFT);
    b.tape("erase-next", "cd", "erase", TapeOp::Write(BLANK));
    b.tape("erase-next", "_", ACCEPT, TapeOp::Identity);
    Ok(b.finish(format!("timing-binary-search-{l}-p{patience}"), "start", &SEARCH_ALPHABET))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decider {
    /// Accept when `w` and the advice together hold an even number of '1's.
    Parity,
}

impl Decider {
    pub fn name(self) -> &'static str {
        match self {
            Decider::Parity => "parity",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        (s == "parity").then_some(Decider::Parity)
    }

    /// Reference decision given the advice string directly.
    pub fn decide(self, w: &str, advice: &str) -> bool {
        match self {
            Decider::Parity => w.chars().chain(advice.chars()).filter(|&c| c == '1').count() % 2 == 0,
        }
    }
}

/// Reads `|w|`, recovers `ceil(c log2 |w|)` digits of the `DG` boundary with
/// the timing search, then applies the decider to `w` and those digits.
/// Inputs longer than `max_len` are rejected.
pub fn advice_then_decide(decider: Decider, c: &Rational, max_len: usize, patience: u32) -> Result<Program> {
    if max_len > 4096 {
        return Err(Error::InvalidParameter(format!("max_len {max_len} exceeds 4096")));
    }
    let lengths: Vec<usize> = (0..=max_len).map(|n| ceil_c_log2(c, n)).collect();
    if let Some(&l) = lengths.iter().find(|&&l| l > MAX_SEARCH_DIGITS) {
        return Err(Error::InvalidParameter(format!("advice length {l} exceeds {MAX_SEARCH_DIGITS}")));
    }
    if patience > 16 {
        return Err(Error::InvalidParameter(format!("patience {patience} exceeds 16")));
    }
    let mut b = Builder::new("n0");
    let mut built = Vec::new();
    for n in 0..=max_len {
        let here = format!("n{n}");
        let next = if n == max_len { REJECT.to_string() } else { format!("n{}", n + 1) };
        b.tape(&here, "01", &next, RIGHT);
        let l = lengths[n];
        if l == 0 {
            b.tape(&here, "_", "even", LEFT);
            continue;
        }
        let gap = counter_bits(l, patience);
        b.tape(&here, "_", &format!("L{l}gap0"), TapeOp::Write('x'));
        if built.contains(&l) {
            continue;
        }
        built.push(l);
        for k in 0..=gap {
            let (cur, wr) = (format!("L{l}gap{k}"), format!("L{l}gapw{}", k + 1));
            if k < gap {
                b.tape(&cur, "x", &wr, RIGHT);
                b.tape(&wr, "_", &format!("L{l}gap{}", k + 1), TapeOp::Write('x'));
            } else {
                b.tape(&cur, "x", &format!("L{l}entry"), RIGHT);
            }
        }
        search_fragment(&mut b, &format!("L{l}"), &format!("L{l}entry"), "even", l, patience);
    }
    match decider {
        Decider::Parity => {
            b.tape("even", "0#cdx", "even", LEFT);
            b.tape("even", "1", "odd", LEFT);
            b.tape("odd", "0#cdx", "odd", LEFT);
            b.tape("odd", "1", "even", LEFT);
            b.tape("even", "_", ACCEPT, TapeOp::Identity);
            b.tape("odd", "_", REJECT, TapeOp::Identity);
        }
    }
    Ok(b.finish(
        format!("advice-then-decide-{}-{c}-{max_len}-p{patience}", decider.name()),
        "n0",
        &SEARCH_ALPHABET,
    ))
}

/// Which floor-binary system an encoding program targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FloorSystem {
    C1,
    C2,
}

/// Builds the number with binary integer part `1w` from 0 using `p` and `t`,
/// then decides membership with the system's measurement.
pub fn encode_and_measure(target: FloorSystem) -> Program {
    let mut b = Builder::new("s");
    b.tape_action("s", "01_", "q", transform("p"));
    b.tape_action("q", "0", "mv", transform("t"));
    b.tape_action("q", "1", "one", transform("t"));
    b.tape_action("one", "1", "mv", transform("p"));
    b.tape("mv", "01", "q", RIGHT);
    match target {
        FloorSystem::C1 => {
            b.tape("q", "_", "m", TapeOp::Identity);
            b.measured("m", "alpha", Element::label("in"), ACCEPT, Action::Tape(TapeOp::Identity));
            b.measured("m", "alpha", Element::label("out"), REJECT, Action::Tape(TapeOp::Identity));
        }
        FloorSystem::C2 => {
            b.tape_action("q", "_", "m", transform("T"));
            b.measured("m", "sign", Element::label("nonneg"), ACCEPT, Action::Tape(TapeOp::Identity));
            b.measured("m", "sign", Element::label("neg"), REJECT, Action::Tape(TapeOp::Identity));
        }
    }
    let name = match target {
        FloorSystem::C1 => "encode-and-measure-c1",
        FloorSystem::C2 => "encode-and-measure-c2",
    };
    b.finish(name.into(), "s", &['0', '1'])
}

/// Copies the input onto the oracle tape right of its head, rewinds, queries
/// and accepts when the oracle wrote `mark`.
pub fn oracle_query(mark: char) -> Result<Program> {
    if mark == BLANK {
        return Err(Error::InvalidParameter("the oracle mark must not be the blank".into()));
    }
    let mut b = Builder::new("o");
    b.tape_action("o", "01_", "c", transform("left"));
    b.tape_action("c", "0", "cm", transform("write-0"));
    b.tape_action("c", "1", "cm", transform("write-1"));
    b.tape_action("cm", "01", "dm", transform("left"));
    b.tape("dm", "01", "c", RIGHT);
    b.tape_action("c", "_", "bd", transform("right"));
    b.tape("bd", "01_", "bk", LEFT);
    b.tape_action("bk", "01", "bd", transform("right"));
    b.tape_action("bk", "_", "ask", transform("query"));
    let alphabet: Vec<char> = ['0', '1']
        .into_iter()
        .chain((mark != '0' && mark != '1').then_some(mark))
        .chain(std::iter::once(BLANK))
        .collect();
    for c in alphabet {
        let to = if c == mark { ACCEPT } else { REJECT };
        b.measured("ask", "read", Element::symbol(c), to, Action::Tape(TapeOp::Identity));
    }
    Ok(b.finish(format!("oracle-query-{mark}"), "o", &['0', '1']))
}
