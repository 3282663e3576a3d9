//! Geometry for the three layered designs: stacked line graph, ThemeRiver,
//! and the dual-flux ThemeRiver with its blocky and smooth variants.
//!
//! All coordinates are in data units: step t occupies x in [t-0.5, t+0.5],
//! the baseline sits at y = 0, and vote mass maps 1:1 to height. Rendering
//! applies the affine transform later.

use crate::types::{MoodId, VoteSeries};
#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Which of the three visual designs a geometry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Design {
    Stacked,
    ThemeRiver,
    DualFlux,
}

/// Dual-flux drawing mode: constant blocks per step, or interpolated
/// trapezoids with seams at order switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Smoothing {
    Blocky,
    #[default]
    Smooth,
}

/// Vertical arrangement of one step of the dual-flux river.
#[derive(Debug, Clone, PartialEq)]
pub struct StepLayout {
    /// 1-based step index.
    pub t: usize,
    /// Mood ids in descending vote order; `order[0]` is the dominant mood.
    pub order: Vec<MoodId>,
    /// Per mood id: (y_low, y_high) relative to the baseline at 0.
    pub extents: Vec<(f64, f64)>,
    /// +W_t / 2.
    pub threshold_upper: f64,
    /// -W_t / 2.
    pub threshold_lower: f64,
}

/// One closed filled shape of a river, in data coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub mood: MoodId,
    /// Closed polyline; the last vertex implicitly connects to the first.
    pub points: Vec<(f64, f64)>,
}

/// A laid-out river: filled polygons plus threshold grid lines.
#[derive(Debug, Clone, PartialEq)]
pub struct RiverGeometry {
    pub design: Design,
    /// Emission order: by mood id, then by time.
    pub polygons: Vec<Polygon>,
    pub gridlines: Vec<Vec<(f64, f64)>>,
    pub x_domain: (f64, f64),
}

impl RiverGeometry {
    /// Bounding y-range over all polygons and gridlines.
    pub fn y_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let points = self
            .polygons
            .iter()
            .flat_map(|p| p.points.iter())
            .chain(self.gridlines.iter().flatten());
        for &(_, y) in points {
            lo = lo.min(y);
            hi = hi.max(y);
        }
        if lo > hi {
            (0.0, 0.0)
        } else {
            (lo, hi)
        }
    }
}

/// Mood ids sorted by descending vote value.
///
/// Ties resolve to the rank in `prev_order` when given (keeping streams
/// visually stable across steps), else to canonical mood order.
pub fn assign_order(votes: &[f64], prev_order: Option<&[MoodId]>) -> Vec<MoodId> {
    let k = votes.len();
    let rank: Vec<usize> = match prev_order {
        Some(prev) => {
            let mut rank = vec![k; k];
            for (r, id) in prev.iter().enumerate() {
                rank[id.index()] = r;
            }
            rank
        }
        None => (0..k).collect(),
    };
    let mut order: Vec<MoodId> = (0..k).map(MoodId::new).collect();
    order.sort_by(|&a, &b| {
        votes[b.index()]
            .total_cmp(&votes[a.index()])
            .then(rank[a.index()].cmp(&rank[b.index()]))
            .then(a.cmp(&b))
    });
    order
}

/// Stacks one step into the two fluxes: the dominant mood above the
/// baseline, the rest downward in rank order, rank 2 touching the baseline.
pub fn assign_positions(t: usize, votes: &[f64], order: &[MoodId]) -> StepLayout {
    let k = votes.len();
    let mut extents = vec![(0.0, 0.0); k];
    let dominant = order[0];
    extents[dominant.index()] = (0.0, votes[dominant.index()]);
    let mut cur_low = 0.0;
    for &id in &order[1..] {
        let v = votes[id.index()];
        extents[id.index()] = (cur_low - v, cur_low);
        cur_low -= v;
    }
    let total: f64 = votes.iter().sum();
    StepLayout {
        t,
        order: order.to_vec(),
        extents,
        threshold_upper: total / 2.0,
        threshold_lower: -(total / 2.0),
    }
}

fn chained_orders(vs: &VoteSeries) -> Vec<Vec<MoodId>> {
    let n = vs.n_steps();
    let mut orders: Vec<Vec<MoodId>> = Vec::with_capacity(n);
    for t in 0..n {
        let votes = vs.votes_at(t);
        let prev = orders.last().map(|o| o.as_slice());
        orders.push(assign_order(&votes, prev));
    }
    orders
}

/// Per-step dual-flux layouts with order ties chained through time,
/// sequential path.
pub fn step_layouts_seq(vs: &VoteSeries) -> Vec<StepLayout> {
    let orders = chained_orders(vs);
    (0..vs.n_steps())
        .map(|t| assign_positions(t + 1, &vs.votes_at(t), &orders[t]))
        .collect()
}

/// Parallel twin of [`step_layouts_seq`]. The order chain is inherently
/// sequential; only the positional stacking fans out.
#[cfg(feature = "parallel")]
pub fn step_layouts_par(vs: &VoteSeries) -> Vec<StepLayout> {
    let orders = chained_orders(vs);
    (0..vs.n_steps())
        .into_par_iter()
        .map(|t| assign_positions(t + 1, &vs.votes_at(t), &orders[t]))
        .collect()
}

/// Per-step dual-flux layouts with order ties chained through time.
pub fn step_layouts(vs: &VoteSeries) -> Vec<StepLayout> {
    #[cfg(feature = "parallel")]
    {
        step_layouts_par(vs)
    }
    #[cfg(not(feature = "parallel"))]
    {
        step_layouts_seq(vs)
    }
}

/// One x-interval of the smooth river, with the layouts at its two edges.
struct Segment {
    x1: f64,
    x2: f64,
    /// Layout index at the left edge.
    left: usize,
    /// Layout index at the right edge (same as left for constant segments).
    right: usize,
}

fn smooth_segments(layouts: &[StepLayout]) -> Vec<Segment> {
    let n = layouts.len();
    let mut segs = Vec::with_capacity(n + 2);
    segs.push(Segment { x1: 0.5, x2: 1.0, left: 0, right: 0 });
    for t in 2..=n {
        let (pre, cur) = (t - 2, t - 1);
        if layouts[pre].order == layouts[cur].order {
            segs.push(Segment {
                x1: t as f64 - 1.0,
                x2: t as f64,
                left: pre,
                right: cur,
            });
        } else {
            segs.push(Segment {
                x1: t as f64 - 1.0,
                x2: t as f64 - 0.5,
                left: pre,
                right: pre,
            });
            segs.push(Segment {
                x1: t as f64 - 0.5,
                x2: t as f64,
                left: cur,
                right: cur,
            });
        }
    }
    segs.push(Segment {
        x1: n as f64,
        x2: n as f64 + 0.5,
        left: n - 1,
        right: n - 1,
    });
    segs
}

/// Dual-flux ThemeRiver geometry.
///
/// Blocky mode draws one constant-height block per mood per step. Smooth
/// mode interpolates between step centers while the order holds and splits
/// the geometry with a vertical seam at the half-step when the order
/// switches. Slicing the smooth geometry at any integer step center
/// reproduces the blocky extents exactly.
pub fn layout_dualflux(vs: &VoteSeries, smoothing: Smoothing) -> RiverGeometry {
    let layouts = step_layouts(vs);
    let k = vs.k();
    let n = vs.n_steps();
    let mut polygons = Vec::new();
    match smoothing {
        Smoothing::Blocky => {
            for c in 0..k {
                for (t, layout) in layouts.iter().enumerate() {
                    let (lo, hi) = layout.extents[c];
                    let x1 = t as f64 + 0.5;
                    let x2 = t as f64 + 1.5;
                    polygons.push(Polygon {
                        mood: MoodId::new(c),
                        points: vec![(x1, hi), (x2, hi), (x2, lo), (x1, lo)],
                    });
                }
            }
        }
        Smoothing::Smooth => {
            let segs = smooth_segments(&layouts);
            for c in 0..k {
                for seg in &segs {
                    let (l_lo, l_hi) = layouts[seg.left].extents[c];
                    let (r_lo, r_hi) = layouts[seg.right].extents[c];
                    polygons.push(Polygon {
                        mood: MoodId::new(c),
                        points: vec![(seg.x1, l_hi), (seg.x2, r_hi), (seg.x2, r_lo), (seg.x1, l_lo)],
                    });
                }
            }
        }
    }
    let gridlines = threshold_gridlines(&layouts, smoothing);
    RiverGeometry {
        design: Design::DualFlux,
        polygons,
        gridlines,
        x_domain: (0.5, n as f64 + 0.5),
    }
}

fn threshold_gridlines(layouts: &[StepLayout], smoothing: Smoothing) -> Vec<Vec<(f64, f64)>> {
    let line = |pick: &dyn Fn(&StepLayout) -> f64| -> Vec<(f64, f64)> {
        let mut pts: Vec<(f64, f64)> = Vec::new();
        let mut push = |p: (f64, f64)| {
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        };
        match smoothing {
            Smoothing::Blocky => {
                for (t, layout) in layouts.iter().enumerate() {
                    let y = pick(layout);
                    push((t as f64 + 0.5, y));
                    push((t as f64 + 1.5, y));
                }
            }
            Smoothing::Smooth => {
                for seg in smooth_segments(layouts) {
                    push((seg.x1, pick(&layouts[seg.left])));
                    push((seg.x2, pick(&layouts[seg.right])));
                }
            }
        }
        pts
    };
    vec![
        line(&|l: &StepLayout| l.threshold_upper),
        line(&|l: &StepLayout| l.threshold_lower),
    ]
}

/// Cumulative tops per mood per step under canonical stacking order:
/// `cum[c][t]` is the sum of votes of moods 0..=c at step t.
fn cumulative_tops(vs: &VoteSeries) -> Vec<Vec<f64>> {
    let k = vs.k();
    let n = vs.n_steps();
    let mut cum = vec![vec![0.0f64; n]; k];
    for t in 0..n {
        let mut acc = 0.0;
        for c in 0..k {
            acc += vs.value(MoodId::new(c), t);
            cum[c][t] = acc;
        }
    }
    cum
}

/// The x positions a continuous band is evaluated at: the domain edges plus
/// every step center. Heights hold flat beyond the first and last centers.
fn band_knots(n: usize) -> Vec<(f64, usize)> {
    let mut knots = Vec::with_capacity(n + 2);
    knots.push((0.5, 0));
    for t in 0..n {
        knots.push((t as f64 + 1.0, t));
    }
    knots.push((n as f64 + 0.5, n - 1));
    knots
}

fn band_geometry(
    vs: &VoteSeries,
    design: Design,
    offset: impl Fn(usize) -> f64,
) -> RiverGeometry {
    let k = vs.k();
    let n = vs.n_steps();
    let cum = cumulative_tops(vs);
    let knots = band_knots(n);
    let mut polygons = Vec::with_capacity(k);
    for c in 0..k {
        let top = |t: usize| cum[c][t] - offset(t);
        let bottom = |t: usize| if c == 0 { -offset(t) } else { cum[c - 1][t] - offset(t) };
        let mut points = Vec::with_capacity(2 * knots.len());
        for &(x, t) in &knots {
            points.push((x, top(t)));
        }
        for &(x, t) in knots.iter().rev() {
            points.push((x, bottom(t)));
        }
        polygons.push(Polygon { mood: MoodId::new(c), points });
    }
    RiverGeometry {
        design,
        polygons,
        gridlines: Vec::new(),
        x_domain: (0.5, n as f64 + 0.5),
    }
}

/// Stacked line graph: moods stacked upward from the baseline in canonical
/// order, heights interpolated linearly between step centers.
pub fn layout_stacked(vs: &VoteSeries) -> RiverGeometry {
    band_geometry(vs, Design::Stacked, |_| 0.0)
}

/// Original ThemeRiver: the stacked bands, vertically centered so the river
/// is symmetric about y = 0.
pub fn layout_themeriver(vs: &VoteSeries) -> RiverGeometry {
    let totals = vs.totals().to_vec();
    band_geometry(vs, Design::ThemeRiver, move |t| totals[t] / 2.0)
}
