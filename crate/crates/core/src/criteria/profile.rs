use serde::{Deserialize, Serialize};

use super::CriteriaError;
use crate::wallspace::Wallspace;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub n: u32,
    pub min: usize,
    pub mean: f64,
    pub max: usize,
    /// A sphere vertex attaining the minimum.
    pub argmin: String,
    /// Lower envelope: the least minimum at distance `n` or beyond.
    pub envelope: usize,
    /// Wall skips caused by carrier membership on this sphere.
    pub carrier_ambiguous: usize,
}

/// `#(1, g)` over the spheres of the trusted ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationProfile {
    pub ball_id: String,
    pub walls: usize,
    pub rows: Vec<ProfileRow>,
    pub step: u32,
    /// The minimum is positive at distance 1 and the envelope strictly
    /// increases over every window of `step` distances.
    pub properness_plausible: bool,
    pub warnings: Vec<String>,
}

impl SeparationProfile {
    pub fn minima(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.min).collect()
    }
}

/// Separation profile for distances `1..=l`. `step` is the longest run of
/// distances over which the minimum may stall.
pub fn linear_separation_profile(
    ws: &Wallspace,
    l: u32,
    step: u32,
) -> Result<SeparationProfile, CriteriaError> {
    if step == 0 {
        return Err(CriteriaError::Input("step must be at least 1".into()));
    }
    if l > ws.trusted_radius() {
        return Err(CriteriaError::Scale {
            message: format!(
                "profile length {l} exceeds the trusted radius {}",
                ws.trusted_radius()
            ),
            minimal_radius: l + ws.margin(),
        });
    }
    let ball = ws.ball();
    let mut rows = Vec::new();
    for n in 1..=l {
        let mut min = usize::MAX;
        let mut max = 0;
        let mut sum = 0usize;
        let mut count = 0usize;
        let mut argmin = 0;
        let mut ambiguous = 0;
        for v in ball.sphere(n) {
            let s = ws.separation_count(0, v)?;
            ambiguous += s.carrier_ambiguous.len();
            if s.count < min {
                min = s.count;
                argmin = v;
            }
            max = max.max(s.count);
            sum += s.count;
            count += 1;
        }
        if count == 0 {
            // finite group exhausted before distance n
            break;
        }
        rows.push(ProfileRow {
            n,
            min,
            mean: sum as f64 / count as f64,
            max,
            argmin: ball.format_vertex(argmin),
            envelope: min,
            carrier_ambiguous: ambiguous,
        });
    }
    for i in (0..rows.len().saturating_sub(1)).rev() {
        rows[i].envelope = rows[i].envelope.min(rows[i + 1].envelope);
    }
    let mut warnings = Vec::new();
    if ws.is_empty() {
        warnings.push("empty wallspace: the profile is identically zero".into());
    }
    if (rows.len() as u32) < l {
        warnings.push(format!("the ball has no vertices beyond distance {}", rows.len()));
    }
    let s = step as usize;
    let plausible = !rows.is_empty()
        && rows[0].min > 0
        && (0..rows.len())
            .filter(|&i| i + s < rows.len())
            .all(|i| rows[i + s].envelope > rows[i].envelope);
    Ok(SeparationProfile {
        ball_id: ws.ball_id().to_string(),
        walls: ws.len(),
        rows,
        step,
        properness_plausible: plausible,
        warnings,
    })
}
