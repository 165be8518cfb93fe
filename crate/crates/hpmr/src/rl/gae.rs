//! Generalized advantage estimation over one episode.

use super::RlError;

/// Standard GAE recursion over an episode of length T with a terminal value
/// of zero:
///
/// delta_t = r_t + gamma * V(s_{t+1}) - V(s_t),
/// A_t = delta_t + gamma * lambda * A_{t+1}.
///
/// For single-step episodes this collapses to A = r - V(s) whatever gamma
/// and lambda are.
pub fn gae(
    rewards: &[f64],
    values: &[f64],
    gamma: f64,
    lambda: f64,
) -> Result<Vec<f64>, RlError> {
    if rewards.len() != values.len() {
        return Err(RlError::LengthMismatch(rewards.len(), values.len()));
    }
    let t_max = rewards.len();
    let mut advantages = vec![0.0; t_max];
    let mut running = 0.0;
    for t in (0..t_max).rev() {
        let next_value = if t + 1 < t_max { values[t + 1] } else { 0.0 };
        let delta = rewards[t] + gamma * next_value - values[t];
        running = delta + gamma * lambda * running;
        advantages[t] = running;
    }
    Ok(advantages)
}
