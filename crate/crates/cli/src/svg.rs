//! Static SVG dendrograms.
//!
//! Leaves are the points in depth-first order of the merge structure, the
//! component with the smaller id drawn on the left; the vertical axis is
//! the radius, increasing upward. Each cluster is a stem from the radius
//! where it forms to the radius where it merges; components never merged
//! run to the top edge. Dashed stems mark where a point is not yet born.

use std::fmt::Write;

use clustertree::{ClusterTree, EventKind};

use crate::error::{CliError, CliResult};

pub const DEFAULT_MAX_POINTS: usize = 1000;

const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 30.0;
const PLOT_HEIGHT: f64 = 360.0;
const LEAF_SPACING: f64 = 12.0;
const LABEL_LIMIT: usize = 60;

#[derive(Debug, Clone, PartialEq)]
struct Node {
    radius: f64,
    point: Option<usize>,
    children: Option<(usize, usize)>,
    parent: Option<usize>,
}

/// Node positions of a dendrogram, in leaf units and radii.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    nodes: Vec<Node>,
    roots: Vec<usize>,
    /// Horizontal position of each node; leaves sit at 0, 1, 2, ...
    x: Vec<f64>,
    /// Points from left to right.
    pub order: Vec<usize>,
}

impl Layout {
    pub fn new(tree: &ClusterTree) -> Layout {
        let mut nodes: Vec<Node> = Vec::new();
        let mut current: Vec<Option<usize>> = vec![None; tree.n()];
        for e in tree.events() {
            let id = nodes.len();
            match e.kind {
                EventKind::Birth { point } => {
                    nodes.push(Node {
                        radius: e.radius,
                        point: Some(point),
                        children: None,
                        parent: None,
                    });
                    current[point] = Some(id);
                }
                EventKind::Merge { a, b } => {
                    let (na, nb) = (
                        current[a].expect("valid trees merge born components"),
                        current[b]
                            .take()
                            .expect("valid trees merge born components"),
                    );
                    nodes[na].parent = Some(id);
                    nodes[nb].parent = Some(id);
                    nodes.push(Node {
                        radius: e.radius,
                        point: None,
                        children: Some((na, nb)),
                        parent: None,
                    });
                    current[a] = Some(id);
                }
            }
        }
        let roots: Vec<usize> = current.into_iter().flatten().collect();

        let mut x = vec![0.0; nodes.len()];
        let mut order = Vec::new();
        for &root in &roots {
            // Post-order walk; an explicit stack keeps deep chains safe.
            let mut stack = vec![(root, false)];
            while let Some((id, expanded)) = stack.pop() {
                match (nodes[id].children, expanded) {
                    (None, _) => {
                        x[id] = order.len() as f64;
                        order.push(nodes[id].point.expect("leaves are points"));
                    }
                    (Some((l, r)), false) => {
                        stack.push((id, true));
                        stack.push((r, false));
                        stack.push((l, false));
                    }
                    (Some((l, r)), true) => x[id] = (x[l] + x[r]) / 2.0,
                }
            }
        }
        Layout {
            nodes,
            roots,
            x,
            order,
        }
    }

    fn top_radius(&self) -> f64 {
        let max = self
            .nodes
            .iter()
            .map(|n| n.radius)
            .filter(|r| r.is_finite())
            .fold(0.0, f64::max);
        if max > 0.0 {
            max * 1.05
        } else {
            1.0
        }
    }
}

fn px(v: f64) -> String {
    format!("{v:.2}")
}

/// Renders `tree`, refusing trees with more than `max_points` points.
pub fn render(tree: &ClusterTree, max_points: usize) -> CliResult<String> {
    if tree.n() > max_points {
        return Err(CliError::Param(format!(
            "tree has {} points, above the render cap of {max_points}; \
             subsample the points (e.g. `clustertree synth --n {max_points}` or a random \
             subset of the CSV rows) and rebuild, or raise --max-points",
            tree.n()
        )));
    }
    let layout = Layout::new(tree);
    let top = layout.top_radius();
    let leaves = layout.order.len().max(1) as f64;
    let width = LEFT + RIGHT + (leaves * LEAF_SPACING).max(240.0);
    let height = TOP + PLOT_HEIGHT + BOTTOM;
    let span = (width - LEFT - RIGHT) / leaves;
    let xp = |x: f64| LEFT + span * (x + 0.5);
    let yp = |r: f64| TOP + PLOT_HEIGHT * (1.0 - r.min(top) / top);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        px(width),
        px(height),
        px(width),
        px(height)
    );
    let _ = writeln!(
        s,
        r#"<g font-family="sans-serif" font-size="9" fill="black" stroke="none">"#
    );
    let axis_x = LEFT - 10.0;
    for t in [0.0, 0.5, 1.0] {
        let r = t * top / 1.05;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{r:.3e}</text>"#,
            px(axis_x - 4.0),
            px(yp(r) + 3.0)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">r</text>"#,
        px(axis_x),
        px(TOP - 6.0)
    );
    if layout.order.len() <= LABEL_LIMIT {
        for (i, p) in layout.order.iter().enumerate() {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="middle">{p}</text>"#,
                px(xp(i as f64)),
                px(TOP + PLOT_HEIGHT + 14.0)
            );
        }
    }
    s.push_str("</g>\n");

    let line = |s: &mut String, x1: f64, y1: f64, x2: f64, y2: f64| {
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            px(x1),
            px(y1),
            px(x2),
            px(y2)
        );
    };
    let _ = writeln!(
        s,
        r##"<g stroke="#999999" stroke-width="1" stroke-dasharray="2,2" fill="none">"##
    );
    for (id, node) in layout.nodes.iter().enumerate() {
        if node.point.is_some() && node.radius > 0.0 {
            let x = xp(layout.x[id]);
            line(&mut s, x, yp(0.0), x, yp(node.radius));
        }
    }
    s.push_str("</g>\n");

    let _ = writeln!(s, r#"<g stroke="black" stroke-width="1" fill="none">"#);
    line(&mut s, axis_x, yp(0.0), axis_x, yp(top));
    for t in [0.0, 0.5, 1.0] {
        let y = yp(t * top / 1.05);
        line(&mut s, axis_x - 3.0, y, axis_x, y);
    }
    for (id, node) in layout.nodes.iter().enumerate() {
        let x = xp(layout.x[id]);
        let end = node.parent.map_or(top, |p| layout.nodes[p].radius);
        line(&mut s, x, yp(node.radius), x, yp(end));
        if let Some((l, r)) = node.children {
            let y = yp(node.radius);
            line(&mut s, xp(layout.x[l]), y, xp(layout.x[r]), y);
        }
    }
    s.push_str("</g>\n</svg>\n");
    debug_assert!(layout
        .roots
        .iter()
        .all(|&r| layout.nodes[r].parent.is_none()));
    Ok(s)
}
