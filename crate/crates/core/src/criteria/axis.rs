use serde::{Deserialize, Serialize};

use super::CriteriaError;
use crate::group::{GroupElement, GroupPresentation};
use crate::wallspace::{Membership, Side, Wallspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisOptions {
    pub n_max: u32,
    pub k_max: u32,
    /// Powers checked by the torsion screen; `None` means `2R`.
    pub order_bound: Option<u32>,
}

impl Default for AxisOptions {
    fn default() -> Self {
        AxisOptions {
            n_max: 2,
            k_max: 2,
            order_bound: None,
        }
    }
}

/// A wall `W` and a power `h = g^(direction·n)` with `W.left ⊊ h·W.left` and
/// `W.right ⊊ h⁻¹·W.right` on the trusted ball, plus the verified chain
/// `h^k·W`, `|k| ≤ k_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisWitness {
    pub wall: usize,
    pub family: String,
    pub translate: String,
    pub n: u32,
    pub direction: i8,
    pub chain_verified_to: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisReport {
    pub element: String,
    pub infinite_order: bool,
    pub witness: Option<AxisWitness>,
    pub verdict: bool,
    pub walls_examined: usize,
    pub notes: Vec<String>,
}

/// Powers `g, g², …, g^bound` are all nontrivial and pairwise distinct.
pub fn is_infinite_order(
    p: &GroupPresentation,
    g: &GroupElement,
    bound: u32,
) -> Result<bool, CriteriaError> {
    let mut seen = std::collections::HashSet::new();
    let mut x = GroupElement::identity();
    seen.insert(x.clone());
    for _ in 0..bound {
        x = p.multiply(&x, g)?;
        if !seen.insert(x.clone()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership in `h·W_i` of every trusted vertex, in trusted order.
fn translated_membership(
    ws: &Wallspace,
    wall: usize,
    h_inv: &GroupElement,
    trusted: &[usize],
) -> Result<Vec<Option<Membership>>, CriteriaError> {
    let p = ws.ball().presentation();
    trusted
        .iter()
        .map(|&v| {
            let y = p.multiply(h_inv, &ws.ball().element(v))?;
            Ok(ws.membership_of(wall, &y)?)
        })
        .collect()
}

fn side(m: Option<Membership>) -> Option<Side> {
    match m {
        Some(Membership::Side(s)) => Some(s),
        _ => None,
    }
}

/// `side` of `inner` is strictly contained in the same side of `outer`,
/// over the points where both are defined.
fn strictly_inside(inner: &[Option<Membership>], outer: &[Option<Membership>], s: Side) -> bool {
    let mut contained = true;
    let mut strict = false;
    for (a, b) in inner.iter().zip(outer) {
        if a.is_none() || b.is_none() {
            continue;
        }
        let (a, b) = (side(*a), side(*b));
        if a == Some(s) && b != Some(s) {
            contained = false;
            break;
        }
        if b == Some(s) && a == Some(s.flip()) {
            strict = true;
        }
    }
    contained && strict
}

fn two_sided(m: &[Option<Membership>]) -> bool {
    let has = |s| m.iter().any(|x| side(*x) == Some(s));
    has(Side::Left) && has(Side::Right)
}

/// Checks a single wall for an axis witness at power `n`; returns the
/// direction found.
pub(crate) fn wall_witness(
    ws: &Wallspace,
    g: &GroupElement,
    wall: usize,
    n: u32,
    k_max: u32,
    trusted: &[usize],
) -> Result<Option<i8>, CriteriaError> {
    let p = ws.ball().presentation();
    let base = translated_membership(ws, wall, &GroupElement::identity(), trusted)?;
    if !two_sided(&base) {
        return Ok(None);
    }
    for dir in [1i8, -1] {
        let h = p.power(g, dir as i64 * n as i64)?;
        let h_inv = p.invert(&h)?;
        // membership in h·W and h⁻¹·W
        let fwd = translated_membership(ws, wall, &h_inv, trusted)?;
        let back = translated_membership(ws, wall, &h, trusted)?;
        if !(strictly_inside(&base, &fwd, Side::Left) && strictly_inside(&base, &back, Side::Right))
        {
            continue;
        }
        // chain h^k·W for |k| ≤ k_max, consecutive lefts strictly growing
        let k = k_max as i64;
        let chain: Vec<Vec<Option<Membership>>> = (-k..=k)
            .map(|j| {
                let hj_inv = p.power(&h, -j)?;
                translated_membership(ws, wall, &hj_inv, trusted)
            })
            .collect::<Result<_, _>>()?;
        let nested = chain.iter().all(|c| two_sided(c))
            && (0..chain.len()).all(|a| {
                (a + 1..chain.len()).all(|b| {
                    strictly_inside(&chain[a], &chain[b], Side::Left)
                        && strictly_inside(&chain[b], &chain[a], Side::Right)
                })
            });
        if nested {
            return Ok(Some(dir));
        }
    }
    Ok(None)
}

pub(crate) fn trusted_vertices(ws: &Wallspace) -> Vec<usize> {
    ws.trusted().ones().collect()
}

/// Scale check for power `n`: `g^(k_max·n)` and one step beyond it must
/// stay in the trusted ball, so that the last wall of the chain still has
/// two trusted sides.
pub(crate) fn check_scale(
    ws: &Wallspace,
    g: &GroupElement,
    n: u32,
    k_max: u32,
) -> Result<(), CriteriaError> {
    let p = ws.ball().presentation();
    let far = p.power(g, (k_max * n) as i64)?.length() as u32;
    if far + 1 > ws.trusted_radius() {
        return Err(CriteriaError::Scale {
            message: format!(
                "|g^{}| + 1 = {} exceeds the trusted radius {}",
                k_max * n,
                far + 1,
                ws.trusted_radius()
            ),
            minimal_radius: far + 1 + ws.margin(),
        });
    }
    Ok(())
}

/// Wall indices in scan order: family, then shortlex translate.
pub(crate) fn scan_order(ws: &Wallspace) -> Vec<usize> {
    let mut order: Vec<usize> = (0..ws.len()).filter(|&i| ws.is_trusted_wall(i)).collect();
    order.sort_by(|&a, &b| {
        let (oa, ob) = (&ws.wall(a).origin, &ws.wall(b).origin);
        (oa.family, &oa.translate, a).cmp(&(ob.family, &ob.translate, b))
    });
    order
}

/// Searches the wallspace for a wall whose translates by powers of `g`
/// nest, then verifies the chain of `2·k_max + 1` translates.
pub fn axis_separation(
    ws: &Wallspace,
    g: &GroupElement,
    opts: &AxisOptions,
) -> Result<AxisReport, CriteriaError> {
    axis_separation_among(ws, g, opts, &scan_order(ws))
}

pub(crate) fn axis_separation_among(
    ws: &Wallspace,
    g: &GroupElement,
    opts: &AxisOptions,
    candidates: &[usize],
) -> Result<AxisReport, CriteriaError> {
    let p = ws.ball().presentation();
    let bound = opts.order_bound.unwrap_or(2 * ws.ball().radius());
    let element = p.format(g);
    if opts.n_max == 0 {
        return Err(CriteriaError::Input("n_max must be at least 1".into()));
    }
    let mut report = AxisReport {
        element,
        infinite_order: true,
        witness: None,
        verdict: false,
        walls_examined: 0,
        notes: Vec::new(),
    };
    if !is_infinite_order(p, g, bound)? {
        report.infinite_order = false;
        report
            .notes
            .push(format!("finite order within {bound} powers; skipped"));
        return Ok(report);
    }
    let trusted = trusted_vertices(ws);
    for n in 1..=opts.n_max {
        if let Err(e) = check_scale(ws, g, n, opts.k_max) {
            if n == 1 {
                return Err(e);
            }
            report.notes.push(format!("stopped before n = {n}: {e}"));
            break;
        }
        for &w in candidates {
            if n == 1 {
                report.walls_examined += 1;
            }
            if let Some(dir) = wall_witness(ws, g, w, n, opts.k_max, &trusted)? {
                let origin = &ws.wall(w).origin;
                report.witness = Some(AxisWitness {
                    wall: w,
                    family: ws.families()[origin.family].label.clone(),
                    translate: p.format(&origin.translate),
                    n,
                    direction: dir,
                    chain_verified_to: opts.k_max,
                });
                report.verdict = true;
                return Ok(report);
            }
        }
    }
    Ok(report)
}
