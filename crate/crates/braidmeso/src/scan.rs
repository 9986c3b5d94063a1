//! Exhaustive cocycle scans over quotient balls: the computational heart of
//! the rapid-decay argument is that |c(g,h)| never exceeds n on Ball_n.

use crate::ball::GroupBall;
use crate::error::Error;
use crate::group::ExecMode;
use crate::quotient::{cocycle, QuotientElement};
use serde::Serialize;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Serialize)]
pub struct CocycleScanReport {
    pub n: u32,
    pub ball_size: usize,
    pub pairs: usize,
    pub max_abs: u32,
    pub witness: (String, String),
    pub pass: bool,
}

/// Scan all pairs of Ball_n(Y_G) for the maximal |c(g,h)|.
pub fn cocycle_bound_scan(
    ball: &GroupBall<QuotientElement>,
    n: u32,
    budget: usize,
    mode: ExecMode,
) -> Result<CocycleScanReport, Error> {
    if n > ball.radius {
        return Err(Error::NotApplicable(format!(
            "scan radius {n} exceeds enumerated ball radius {}",
            ball.radius
        )));
    }
    let elems: Vec<QuotientElement> = {
        let mut v: Vec<QuotientElement> = ball
            .dist
            .iter()
            .filter(|(_, &d)| d <= n)
            .map(|(e, _)| e.clone())
            .collect();
        v.sort();
        v
    };
    let pairs = elems.len() * elems.len();
    if pairs > budget {
        return Err(Error::ResourceLimit {
            what: format!("cocycle scan at n={n} ({pairs} pairs)"),
            budget,
        });
    }
    let row_max = |g: &QuotientElement| -> (u32, (String, String)) {
        let mut best = 0u32;
        let mut witness = (String::new(), String::new());
        for h in &elems {
            let c = cocycle(g, h).unsigned_abs();
            if c > best {
                best = c;
                witness = (g.text_form(), h.text_form());
            }
        }
        (best, witness)
    };
    let (max_abs, witness) = {
        let reduce = |rows: Vec<(u32, (String, String))>| {
            rows.into_iter()
                .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)))
                .unwrap_or((0, (String::new(), String::new())))
        };
        match mode {
            #[cfg(feature = "parallel")]
            ExecMode::Parallel => reduce(elems.par_iter().map(row_max).collect()),
            _ => reduce(elems.iter().map(row_max).collect()),
        }
    };
    let witness = if max_abs == 0 {
        (
            QuotientElement::identity().text_form(),
            QuotientElement::identity().text_form(),
        )
    } else {
        witness
    };
    Ok(CocycleScanReport {
        n,
        ball_size: elems.len(),
        pairs,
        max_abs,
        witness,
        pass: max_abs <= n,
    })
}

/// The 2-cocycle identity c(g,h) + c(gh,k) = c(h,k) + c(g,hk), exhaustively
/// over all triples of the given ball slice.
pub fn cocycle_identity_exhaustive(
    ball: &GroupBall<QuotientElement>,
    n: u32,
    mode: ExecMode,
) -> bool {
    let elems: Vec<QuotientElement> = {
        let mut v: Vec<QuotientElement> = ball
            .dist
            .iter()
            .filter(|(_, &d)| d <= n)
            .map(|(e, _)| e.clone())
            .collect();
        v.sort();
        v
    };
    let check_g = |g: &QuotientElement| {
        for h in &elems {
            let gh = g.op_ref(h);
            for k in &elems {
                let hk = h.op_ref(k);
                if cocycle(g, h) + cocycle(&gh, k) != cocycle(h, k) + cocycle(g, &hk) {
                    return false;
                }
            }
        }
        true
    };
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => elems.par_iter().all(check_g),
        _ => elems.iter().all(check_g),
    }
}

trait OpRef {
    fn op_ref(&self, other: &Self) -> Self;
}

impl OpRef for QuotientElement {
    fn op_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::enumerate_ball_g;

    #[test]
    fn scan_radius_zero_is_zero() {
        let ball = enumerate_ball_g(1, 10_000, ExecMode::default()).unwrap();
        let rep = cocycle_bound_scan(&ball, 0, 10_000, ExecMode::default()).unwrap();
        assert_eq!(rep.max_abs, 0);
        assert!(rep.pass);
    }

    #[test]
    fn scan_radius_one_respects_bound() {
        let ball = enumerate_ball_g(1, 10_000, ExecMode::default()).unwrap();
        let rep = cocycle_bound_scan(&ball, 1, 1_000_000, ExecMode::default()).unwrap();
        assert!(rep.max_abs <= 1, "max {}", rep.max_abs);
        assert!(rep.pass);
    }

    #[test]
    fn identity_holds_on_radius_one() {
        let ball = enumerate_ball_g(1, 10_000, ExecMode::default()).unwrap();
        assert!(cocycle_identity_exhaustive(&ball, 1, ExecMode::default()));
    }

    #[test]
    fn parallel_scan_matches_sequential() {
        let ball = enumerate_ball_g(1, 10_000, ExecMode::default()).unwrap();
        let a = cocycle_bound_scan(&ball, 1, 1_000_000, ExecMode::Sequential).unwrap();
        let b = cocycle_bound_scan(&ball, 1, 1_000_000, ExecMode::Parallel).unwrap();
        assert_eq!(a.max_abs, b.max_abs);
    }
}
