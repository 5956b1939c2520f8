//! Rarefactive/compressive classification of jump edges, interaction-point
//! preservation checks, and district assembly.
//!
//! Every edge carries a two-letter character: the capital letter is the
//! character of the edge's own jump (`R` when `u` increases west to east,
//! which for both families is strength `+1`), the subscript is the character
//! of the adjacent jump of the same family on the classifying side. Since a
//! front's strength never changes and same-family fronts never cross before
//! a collision stops the run, the character of every edge of a front is the
//! same; interactions preserve it, which is exactly what the diamond
//! preservation check certifies on raw corner states.
//!
//! Two classifying-side conventions are implemented because the u-triple can
//! be read off either side of the edge; [`SubSide::Behind`] compares across
//! the neighbouring same-family jump behind the edge (east for backward
//! edges, west for forward ones), [`SubSide::Ahead`] across the one ahead.
//! The functional checks are run against one fixed convention; see
//! [`crate::functional`].

use alloc::vec::Vec;
use core::fmt;

use crate::state::StandardState;
use crate::tracker::{EventRec, Family, Trace};

/// Main (capital) character of an edge: its own jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MainChar {
    Rarefactive,
    Compressive,
}

/// Subscript character: the adjacent same-family jump on the classifying side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubChar {
    Rarefactive,
    Compressive,
}

/// Which adjacent same-family edge supplies the subscript.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubSide {
    /// Backward edges read `(u_-, u_+, u_++)` (eastern neighbour), forward
    /// edges `(u_--, u_-, u_+)` (western neighbour).
    Behind,
    /// Mirrored: backward edges use the western neighbour, forward edges the
    /// eastern one (the side the edge is moving toward).
    Ahead,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeCharacter {
    pub family: Family,
    pub main: MainChar,
    pub sub: SubChar,
}

impl EdgeCharacter {
    pub fn is_rr(&self) -> bool {
        self.main == MainChar::Rarefactive && self.sub == SubChar::Rarefactive
    }

    pub fn label(&self) -> &'static str {
        match (self.main, self.sub) {
            (MainChar::Rarefactive, SubChar::Rarefactive) => "R_r",
            (MainChar::Rarefactive, SubChar::Compressive) => "R_c",
            (MainChar::Compressive, SubChar::Rarefactive) => "C_r",
            (MainChar::Compressive, SubChar::Compressive) => "C_c",
        }
    }
}

impl fmt::Display for EdgeCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.family.label(), self.label())
    }
}

fn main_of_strength(strength: i8) -> MainChar {
    if strength > 0 {
        MainChar::Rarefactive
    } else {
        MainChar::Compressive
    }
}

/// Per-family birth order of fronts; same-family fronts keep their spatial
/// order for the whole run, so this is the adjacency structure for subscript
/// characters.
#[derive(Debug, Clone)]
pub struct FamilyOrder {
    /// Front ids of each family sorted west to east by birth position.
    pub backward: Vec<usize>,
    pub forward: Vec<usize>,
    /// Position of each front inside its family list.
    pub rank: Vec<usize>,
}

impl FamilyOrder {
    pub fn build(trace: &Trace) -> Self {
        let mut backward: Vec<usize> = Vec::new();
        let mut forward: Vec<usize> = Vec::new();
        for f in &trace.fronts {
            match f.family {
                Family::Backward => backward.push(f.id),
                Family::Forward => forward.push(f.id),
            }
        }
        let key = |id: &usize| trace.fronts[*id].birth_x;
        backward.sort_by(|a, b| key(a).total_cmp(&key(b)).then(a.cmp(b)));
        forward.sort_by(|a, b| key(a).total_cmp(&key(b)).then(a.cmp(b)));
        let mut rank = alloc::vec![0usize; trace.fronts.len()];
        for (pos, &id) in backward.iter().enumerate() {
            rank[id] = pos;
        }
        for (pos, &id) in forward.iter().enumerate() {
            rank[id] = pos;
        }
        FamilyOrder {
            backward,
            forward,
            rank,
        }
    }

    fn list(&self, family: Family) -> &[usize] {
        match family {
            Family::Backward => &self.backward,
            Family::Forward => &self.forward,
        }
    }

    /// Same-family neighbour west (east) of `front` when `east` is false
    /// (true).
    pub fn neighbour(&self, trace: &Trace, front: usize, east: bool) -> Option<usize> {
        let list = self.list(trace.fronts[front].family);
        let pos = self.rank[front];
        if east {
            list.get(pos + 1).copied()
        } else {
            pos.checked_sub(1).and_then(|p| list.get(p).copied())
        }
    }
}

/// Character of every edge of `front`; constant along its trajectory.
///
/// Outermost edges (no same-family neighbour on the classifying side) take
/// the one-sided rule: the subscript repeats the main character, so such
/// edges are always `R_r` or `C_c`.
pub fn classify_front(
    trace: &Trace,
    order: &FamilyOrder,
    front: usize,
    side: SubSide,
) -> EdgeCharacter {
    let f = &trace.fronts[front];
    let east = match (side, f.family) {
        (SubSide::Behind, Family::Backward) => true,
        (SubSide::Behind, Family::Forward) => false,
        (SubSide::Ahead, Family::Backward) => false,
        (SubSide::Ahead, Family::Forward) => true,
    };
    let main = main_of_strength(f.strength);
    let sub = match order.neighbour(trace, front, east) {
        Some(nb) => match main_of_strength(trace.fronts[nb].strength) {
            MainChar::Rarefactive => SubChar::Rarefactive,
            MainChar::Compressive => SubChar::Compressive,
        },
        None => match main {
            MainChar::Rarefactive => SubChar::Rarefactive,
            MainChar::Compressive => SubChar::Compressive,
        },
    };
    EdgeCharacter {
        family: f.family,
        main,
        sub,
    }
}

/// Character of one trace segment (all segments of a front agree).
pub fn classify_edge(
    trace: &Trace,
    order: &FamilyOrder,
    segment: usize,
    side: SubSide,
) -> EdgeCharacter {
    classify_front(trace, order, trace.segments[segment].front, side)
}

/// Four corner states around one interaction point: north is the re-solved
/// middle. Constructible by hand for negative controls.
#[derive(Debug, Clone, Copy)]
pub struct PointDiamond {
    pub west: StandardState,
    pub south: StandardState,
    pub east: StandardState,
    pub north: StandardState,
}

impl PointDiamond {
    pub fn from_event(ev: &EventRec) -> Option<Self> {
        ev.corners.map(|c| PointDiamond {
            west: c.west,
            south: c.south,
            east: c.east,
            north: c.north,
        })
    }
}

/// Checks character preservation through one interaction on raw states:
/// the exact integer identities
///
/// ```text
/// u_N - u_E = u_W - u_S    and    u_N - u_W = u_E - u_S
/// ```
///
/// hold, and the incoming and outgoing jumps of each family carry the same
/// strength (so the main character, and with it the per-front subscript, is
/// preserved).
pub fn check_diamond_preservation(d: &PointDiamond) -> bool {
    let (w, s, e, n) = (&d.west, &d.south, &d.east, &d.north);
    // u-identities in exact integers
    if n.i - e.i != w.i - s.i || n.i - w.i != e.i - s.i {
        return false;
    }
    // backward family: in-edge S|E, out-edge W|N; strengths from the jumps
    let m_in = e.i - s.i;
    let m_out = n.i - w.i;
    if m_in != m_out || (e.j - s.j) != m_in || (n.j - w.j) != m_out {
        return false;
    }
    // forward family: in-edge W|S, out-edge N|E
    let n_in = s.i - w.i;
    let n_out = e.i - n.i;
    if n_in != n_out || (w.j - s.j) != n_in || (n.j - e.j) != n_out {
        return false;
    }
    m_in.abs() == 1 && n_in.abs() == 1
}

/// Runs the preservation check over every interaction of a trace.
pub fn verify_character_preservation(trace: &Trace) -> bool {
    trace
        .interactions()
        .filter_map(PointDiamond::from_event)
        .all(|d| check_diamond_preservation(&d))
}

/// Block type: characters of the bounding forward and backward fronts.
/// `None` when the block has no bounding front of that family (constant
/// far-field regions).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockType {
    pub forward: Option<EdgeCharacter>,
    pub backward: Option<EdgeCharacter>,
}

impl BlockType {
    pub fn is_rr_rr(&self) -> bool {
        matches!((self.forward, self.backward), (Some(f), Some(b)) if f.is_rr() && b.is_rr())
    }
}

#[derive(Debug, Clone)]
pub struct District {
    pub id: usize,
    pub block_type: BlockType,
    pub blocks: Vec<usize>,
    pub t_min: f64,
    pub t_max: f64,
}

#[derive(Debug, Clone)]
pub struct Districts {
    pub block_type: Vec<BlockType>,
    /// District id per block.
    pub district_of: Vec<usize>,
    pub districts: Vec<District>,
}

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

/// Assigns every block a type and groups edge-adjacent blocks of equal type
/// into maximal districts.
pub fn build_districts(trace: &Trace, order: &FamilyOrder, side: SubSide) -> Districts {
    let nblocks = trace.blocks.len();
    let mut fwd_front: Vec<Option<usize>> = alloc::vec![None; nblocks];
    let mut bwd_front: Vec<Option<usize>> = alloc::vec![None; nblocks];

    // event-born blocks: typed by the two fronts of the birth event
    for ev in trace.interactions() {
        let c = ev.corners.expect("interaction has corners");
        let nb = trace.segments[c.out_backward].right_block;
        bwd_front[nb] = Some(ev.participants.0);
        fwd_front[nb] = Some(ev.participants.1);
    }
    // initial blocks: flanking fronts at birth; the forward character
    // prefers the west bound (it leans over the cell), the backward
    // character the east bound
    let mut west_bound: Vec<Option<usize>> = alloc::vec![None; nblocks];
    let mut east_bound: Vec<Option<usize>> = alloc::vec![None; nblocks];
    for seg in &trace.segments {
        if seg.t0 != 0.0 {
            continue;
        }
        if trace.blocks[seg.right_block].birth_event.is_none() {
            west_bound[seg.right_block] = Some(seg.front);
        }
        if trace.blocks[seg.left_block].birth_event.is_none() {
            east_bound[seg.left_block] = Some(seg.front);
        }
    }
    for b in 0..nblocks {
        if trace.blocks[b].birth_event.is_some() {
            continue;
        }
        let is_fwd = |f: &usize| trace.fronts[*f].family == Family::Forward;
        let is_bwd = |f: &usize| trace.fronts[*f].family == Family::Backward;
        fwd_front[b] = west_bound[b]
            .filter(is_fwd)
            .or(east_bound[b].filter(is_fwd));
        bwd_front[b] = east_bound[b]
            .filter(is_bwd)
            .or(west_bound[b].filter(is_bwd));
    }

    let block_type: Vec<BlockType> = (0..nblocks)
        .map(|b| BlockType {
            forward: fwd_front[b].map(|f| classify_front(trace, order, f, side)),
            backward: bwd_front[b].map(|f| classify_front(trace, order, f, side)),
        })
        .collect();

    let mut parent: Vec<usize> = (0..nblocks).collect();
    for seg in &trace.segments {
        let (a, b) = (seg.left_block, seg.right_block);
        if block_type[a] == block_type[b] {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[rb.max(ra)] = ra.min(rb);
            }
        }
    }

    let mut district_of = alloc::vec![usize::MAX; nblocks];
    let mut districts: Vec<District> = Vec::new();
    for b in 0..nblocks {
        let root = find(&mut parent, b);
        if district_of[root] == usize::MAX {
            district_of[root] = districts.len();
            districts.push(District {
                id: districts.len(),
                block_type: block_type[root],
                blocks: Vec::new(),
                t_min: f64::INFINITY,
                t_max: f64::NEG_INFINITY,
            });
        }
        let d = district_of[root];
        district_of[b] = d;
        districts[d].blocks.push(b);
        let blk = &trace.blocks[b];
        districts[d].t_min = districts[d].t_min.min(blk.birth_time);
        districts[d].t_max = districts[d].t_max.max(blk.death_time);
    }

    Districts {
        block_type,
        district_of,
        districts,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayCheck {
    Pass,
    Fail,
    NotApplicable,
}

/// District-wise volume decay: for a district whose forward character is
/// compressive or `R_c`, the volume on blocks adjacent above its north-west
/// boundary must not exceed the maximum over blocks adjacent below its
/// south-east boundary, and every volume index inside the district exceeds
/// that maximum by at most one lattice step. Mirrored for the backward
/// family. Integer j comparisons throughout.
pub fn check_district_decay(trace: &Trace, districts: &Districts, id: usize) -> DecayCheck {
    let d = &districts.districts[id];
    let in_d = |b: usize| districts.district_of[b] == id;
    let fwd_applicable = matches!(d.block_type.forward, Some(c) if !c.is_rr());
    let bwd_applicable = matches!(d.block_type.backward, Some(c) if !c.is_rr());
    if !fwd_applicable && !bwd_applicable {
        return DecayCheck::NotApplicable;
    }

    let mut ok = true;
    for (family, applicable) in [
        (Family::Forward, fwd_applicable),
        (Family::Backward, bwd_applicable),
    ] {
        if !applicable {
            continue;
        }
        // For the forward family: lower side of a forward edge is its east
        // (right) block, upper side the west (left). Mirrored for backward.
        let mut below_max: Option<i64> = None;
        let mut above: Vec<i64> = Vec::new();
        for seg in &trace.segments {
            if trace.fronts[seg.front].family != family {
                continue;
            }
            let (upper, lower) = match family {
                Family::Forward => (seg.left_block, seg.right_block),
                Family::Backward => (seg.right_block, seg.left_block),
            };
            match (in_d(upper), in_d(lower)) {
                (true, false) => {
                    let j = trace.blocks[lower].state.j;
                    below_max = Some(below_max.map_or(j, |m: i64| m.max(j)));
                }
                (false, true) => above.push(trace.blocks[upper].state.j),
                _ => {}
            }
        }
        if let Some(maxb) = below_max {
            if above.iter().any(|&j| j > maxb) {
                ok = false;
            }
            if d.blocks.iter().any(|&b| trace.blocks[b].state.j > maxb + 1) {
                ok = false;
            }
        }
    }
    if ok {
        DecayCheck::Pass
    } else {
        DecayCheck::Fail
    }
}
