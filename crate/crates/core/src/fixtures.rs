//! Small machines, transition systems and complexes used by the tests, the
//! examples in the docs and the acceptance suite.

use crate::its::{extract_its, Its};
use crate::machine::{InputSpace, PtMachine, WorkState};
use crate::topo::SimplicialComplex;

pub const ECHO: &str = include_str!("../fixtures/echo.ptm");
pub const ECHO2: &str = include_str!("../fixtures/echo2.ptm");
pub const LOOP: &str = include_str!("../fixtures/loop.ptm");
pub const HALTNOW: &str = include_str!("../fixtures/haltnow.ptm");
pub const LATCH: &str = include_str!("../fixtures/latch.ptm");
pub const GUESS: &str = include_str!("../fixtures/guess.ptm");
pub const SWAP: &str = include_str!("../fixtures/swap.ptm");
pub const ONCE: &str = include_str!("../fixtures/once.ptm");
pub const TWICE: &str = include_str!("../fixtures/twice.ptm");

pub const ITS_SELFLOOP: &str = include_str!("../fixtures/its/selfloop.its");
pub const ITS_CYCLE2: &str = include_str!("../fixtures/its/cycle2.its");
pub const ITS_FORK: &str = include_str!("../fixtures/its/fork.its");
pub const ITS_JOIN: &str = include_str!("../fixtures/its/join.its");
pub const ITS_EARLY: &str = include_str!("../fixtures/its/early.its");
pub const ITS_LATE: &str = include_str!("../fixtures/its/late.its");

fn machine(text: &str) -> PtMachine {
    PtMachine::parse(text).expect("fixture machine parses")
}

pub fn echo() -> PtMachine {
    machine(ECHO)
}

pub fn echo2() -> PtMachine {
    machine(ECHO2)
}

pub fn loop_machine() -> PtMachine {
    machine(LOOP)
}

pub fn haltnow() -> PtMachine {
    machine(HALTNOW)
}

pub fn latch() -> PtMachine {
    machine(LATCH)
}

pub fn guess() -> PtMachine {
    machine(GUESS)
}

pub fn swap() -> PtMachine {
    machine(SWAP)
}

pub fn once() -> PtMachine {
    machine(ONCE)
}

pub fn twice() -> PtMachine {
    machine(TWICE)
}

/// The machine corpus by name.
pub fn machines() -> Vec<(&'static str, PtMachine)> {
    vec![
        ("echo", echo()),
        ("echo2", echo2()),
        ("swap", swap()),
        ("loop", loop_machine()),
        ("haltnow", haltnow()),
        ("latch", latch()),
        ("guess", guess()),
        ("once", once()),
        ("twice", twice()),
    ]
}

fn its(text: &str) -> Its {
    Its::parse(text).expect("fixture ITS parses")
}

pub fn its_selfloop() -> Its {
    its(ITS_SELFLOOP)
}

pub fn its_cycle2() -> Its {
    its(ITS_CYCLE2)
}

pub fn its_fork() -> Its {
    its(ITS_FORK)
}

pub fn its_join() -> Its {
    its(ITS_JOIN)
}

/// Trace equivalent to [`its_late`] at every depth, but not bisimilar.
pub fn its_early() -> Its {
    its(ITS_EARLY)
}

pub fn its_late() -> Its {
    its(ITS_LATE)
}

/// ECHO unfolded over inputs of length <= 1 on `{a}`, two layers deep.
pub fn its_echo() -> Its {
    extract_its(&echo(), &InputSpace::new(['a'], 1), 2, 50).expect("echo unfolds")
}

pub fn its_loop() -> Its {
    extract_its(&loop_machine(), &InputSpace::new(['a'], 1), 2, 50).expect("loop unfolds")
}

/// The renaming applied by [`its_echo_renamed`].
pub fn echo_rename(s: &WorkState) -> WorkState {
    match s {
        WorkState::Word(w) => WorkState::Word(format!("z{w}")),
        WorkState::Div => WorkState::Div,
    }
}

pub fn its_echo_renamed() -> Its {
    its_echo().relabel(echo_rename).expect("renaming is injective")
}

pub const TORUS7: &str = include_str!("../fixtures/torus7.cplx");
pub const TETRA_HOLLOW: &str = include_str!("../fixtures/tetra-hollow.cplx");
pub const TRI_HOLLOW: &str = include_str!("../fixtures/tri-hollow.cplx");
pub const TRI_FILL: &str = include_str!("../fixtures/tri-fill.filt");

fn complex(text: &str) -> SimplicialComplex {
    SimplicialComplex::parse(text).expect("fixture complex parses")
}

pub fn point() -> SimplicialComplex {
    complex("0\n")
}

pub fn hollow_triangle() -> SimplicialComplex {
    complex(TRI_HOLLOW)
}

pub fn filled_triangle() -> SimplicialComplex {
    complex("0 1 2\n")
}

/// Boundary of the 3-simplex: a triangulated sphere.
pub fn hollow_tetrahedron() -> SimplicialComplex {
    complex(TETRA_HOLLOW)
}

/// The minimal torus: triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
pub fn torus7() -> SimplicialComplex {
    complex(TORUS7)
}

/// A LATCH stream whose configurations close up into a 5-cycle.
pub const LATCH_INPUTS: &[&str] = &["", "a", "ab", "bc", "", ""];

/// Scale at which [`LATCH_INPUTS`] gives exactly the 5-cycle: consecutive
/// configurations are at most 5/2 apart, all others at least 3.
pub fn latch_eps() -> num_rational::Rational64 {
    num_rational::Rational64::new(5, 2)
}

pub const BELT: &str = include_str!("../fixtures/belt.path");
pub const NECK: &str = include_str!("../fixtures/neck.path");
