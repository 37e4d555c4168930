#![allow(dead_code)]

use strandcolor::colorers::{Assignment, InputShape};
use strandcolor::harness::{adapt, generate, GenKind, GenSpec};
use strandcolor::stream::{EdgeKey, GraphStream, StreamBuilder, StreamHeader, Mode};

/// Stream families of the properness suite.
pub const FAMILIES: [&str; 5] = ["regular-bipartite", "random-simple", "random-multigraph", "star", "path"];

/// A suite stream of `family`, already in the input shape of `shape`.
pub fn suite_stream(family: &str, shape: InputShape, n: u32, delta: u32, seed: u64) -> GraphStream {
    let bipartite = matches!(shape, InputShape::OneSided | InputShape::BipartiteEdgeArrival);
    let base = GenSpec { n: Some(n), delta: Some(delta), seed, bipartite, ..Default::default() };
    let spec = match family {
        "regular-bipartite" => GenSpec {
            kind: Some(GenKind::RegularBipartite),
            na: Some(n / 2),
            nb: Some(n - n / 2),
            ..base
        },
        "random-simple" => GenSpec { kind: Some(GenKind::RandomSimple), ..base },
        "random-multigraph" => GenSpec { kind: Some(GenKind::RandomMultigraph), bias: Some(0.5), ..base },
        "star" => GenSpec { kind: Some(GenKind::Star), n: Some(delta + 1), ..base },
        "path" => GenSpec { kind: Some(GenKind::Path), ..base },
        other => panic!("unknown family {other}"),
    };
    let s = generate(&spec).unwrap_or_else(|e| panic!("{family}: {e}"));
    adapt(&s, shape, seed).unwrap_or_else(|e| panic!("{family} as {shape:?}: {e}"))
}

/// Hand-built stream from edge pairs.
pub fn ea_stream(n: u32, delta: u32, a: Option<u32>, edges: &[(u32, u32)]) -> GraphStream {
    let mut b = StreamBuilder::new(StreamHeader { n, delta, mode: Mode::Ea, a }).unwrap();
    for &(x, y) in edges {
        b.push_edge(x, y).unwrap();
    }
    b.finish()
}

/// Second properness checker: dense vertex-by-color occupancy scan.
///
/// Returns `(conflicts, missing, duplicate)` counts. A doubly assigned edge keeps its last color.
pub fn matrix_check(stream: &GraphStream, assignments: &[Assignment]) -> (usize, usize, usize) {
    let m = stream.edge_count();
    let mut ends = vec![None; m + 1];
    for e in stream.edges() {
        ends[e.seq as usize] = Some(EdgeKey::new(e.u, e.v));
    }
    let mut palette: Vec<String> = assignments.iter().map(|a| a.color.to_string()).collect();
    palette.sort();
    palette.dedup();
    let k = palette.len();
    let n = stream.header.n as usize;
    let mut grid = vec![0u32; (n + 1) * k.max(1)];
    let mut seen = vec![0u32; m + 1];
    let mut last = vec![None; m + 1];
    let (mut missing, mut dup, mut conflicts) = (0, 0, 0);
    for a in assignments {
        let seq = a.seq as usize;
        if seq == 0 || seq > m {
            continue;
        }
        seen[seq] += 1;
        last[seq] = Some(palette.binary_search(&a.color.to_string()).unwrap());
    }
    for seq in 1..=m {
        if let (Some(c), Some(key)) = (last[seq], ends[seq]) {
            for v in [key.0, key.1] {
                grid[v as usize * k + c] += 1;
            }
        }
    }
    for s in &seen[1..] {
        match s {
            0 => missing += 1,
            1 => {}
            _ => dup += 1,
        }
    }
    for cell in grid {
        if cell > 1 {
            conflicts += 1;
        }
    }
    (conflicts, missing, dup)
}
