use kappa::staircase::Staircase;
use kappa::shannon;
use kappa::rat::fmt_rat;
use std::time::Instant;

fn main() {
    // Criterion 2 samples: two-point staircases, kappa should be 2 - 1/w.
    for (w, h, i1) in [(2u32,1u32,1u32),(3,2,1),(6,6,2),(5,3,2)] {
        let s = Staircase::from_points(vec![(i1, h), (i1+w, 0)]).unwrap();
        let r = shannon::kappa(&s).unwrap();
        println!("t2 w={w} h={h} i1={i1}: {}", fmt_rat(&r.kappa));
    }
    // Criterion 3 samples: regular w=h shifted off axes.
    for (w, ell) in [(2u32,2u32),(3,2),(4,3)] {
        let mut pts = Vec::new();
        for k in 0..ell { pts.push((1 + k*w, 1 + (ell-1-k)*w)); }
        let s = Staircase::from_points(pts).unwrap();
        let t0 = Instant::now();
        let r = shannon::kappa(&s).unwrap();
        println!("t3 w={w} ell={ell}: {} in {:?}", fmt_rat(&r.kappa), t0.elapsed());
    }
    // Criterion 4 samples: height-1 equal widths.
    for (w, ell) in [(3u32,2u32),(3,3),(4,3)] {
        let mut pts = Vec::new();
        for k in 0..ell { pts.push((1 + k*w, ell-1-k)); }
        let s = Staircase::from_points(pts).unwrap();
        let r = shannon::kappa(&s).unwrap();
        println!("t45 w={w} ell={ell}: {} (kappa0 = {})", fmt_rat(&r.kappa),
            fmt_rat(&shannon::bound_matus(&vec![w; (ell-1) as usize]).unwrap()));
    }
    // Criterion 11 samples: discretized lines.
    for n in 2u32..=4 {
        let pts: Vec<(u32,u32)> = (0..=n).map(|k| (2*k, n-k)).collect();
        let s = Staircase::from_points(pts).unwrap();
        let t0 = Instant::now();
        let r = shannon::kappa(&s).unwrap();
        println!("line(0,{n})-({},0): {} in {:?}", 2*n, fmt_rat(&r.kappa), t0.elapsed());
        let pts2: Vec<(u32,u32)> = (0..=n).map(|k| (k, n-k)).collect();
        let s2 = Staircase::from_points(pts2).unwrap();
        println!("  symmetric: {}", fmt_rat(&shannon::kappa(&s2).unwrap().kappa));
    }
}
