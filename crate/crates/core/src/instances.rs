//! Built-in finite uniform locales.

use crate::frame::FiniteFrame;
use crate::uniform::{Cover, UniformityBase};

/// A finite frame with a base for a uniformity.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub frame: FiniteFrame,
    pub base: UniformityBase,
}

const POINTS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// The discrete space on `n` points with the single cover by singletons.
pub fn discrete(n: usize) -> Instance {
    assert!((1..=POINTS.len()).contains(&n));
    let frame = FiniteFrame::powerset(&POINTS[..n]);
    let cover = Cover::new((0..n).map(|i| 1usize << i));
    Instance {
        name: format!("discrete-{n}"),
        frame,
        base: UniformityBase {
            covers: vec![cover],
            star_witness: vec![0],
        },
    }
}

/// The discrete locale on `n` points with the indiscrete pre-uniformity,
/// generated by the trivial cover `{1}`.
pub fn indiscrete(n: usize) -> Instance {
    assert!((1..=POINTS.len()).contains(&n));
    let frame = FiniteFrame::powerset(&POINTS[..n]);
    let top = frame.top();
    Instance {
        name: format!("indiscrete-{n}"),
        frame,
        base: UniformityBase {
            covers: vec![Cover::new([top])],
            star_witness: vec![0],
        },
    }
}

/// Looks up a built-in finite instance by name.
pub fn builtin(name: &str) -> Option<Instance> {
    match name {
        "discrete-1" => Some(discrete(1)),
        "discrete-2" => Some(discrete(2)),
        "discrete-3" => Some(discrete(3)),
        "indiscrete-2" => Some(indiscrete(2)),
        _ => None,
    }
}

/// Names accepted by [`builtin`], plus the rational line.
pub const BUILTIN_NAMES: [&str; 5] = [
    "discrete-1",
    "discrete-2",
    "discrete-3",
    "indiscrete-2",
    "rational-line",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uniform::validate_uniformity;

    #[test]
    fn builtins_are_pre_uniform() {
        for name in BUILTIN_NAMES.iter().filter(|n| **n != "rational-line") {
            let inst = builtin(name).unwrap();
            let report = validate_uniformity(&inst.base, &inst.frame);
            assert!(report.is_valid(), "{name}");
            assert_eq!(report.is_uniform(), !name.starts_with("indiscrete"), "{name}");
        }
    }
}
