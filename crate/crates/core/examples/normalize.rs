//! Moving real boxes with open and closed ends onto an integer grid without
//! changing which pairs intersect.

use gridsat::boxmodel::{normalize_boxes, RealBox, RealInterval};

fn main() {
    let boxes = vec![
        RealBox { intervals: vec![RealInterval::new(0.0, true, 1.5, false).unwrap()] },
        RealBox { intervals: vec![RealInterval::new(1.5, true, 4.0, true).unwrap()] },
        RealBox { intervals: vec![RealInterval::new(-2.0, false, 0.0, true).unwrap()] },
        RealBox { intervals: vec![RealInterval::new(4.0, false, 7.25, true).unwrap()] },
    ];
    for (real, grid) in boxes.iter().zip(normalize_boxes(&boxes)) {
        let iv = real.intervals[0];
        println!(
            "{}{}, {}{}  ->  {:?}",
            if iv.lo.closed { '[' } else { '(' },
            iv.lo.value,
            iv.hi.value,
            if iv.hi.closed { ']' } else { ')' },
            grid.bounds[0]
        );
    }
}
