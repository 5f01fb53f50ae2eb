//! Which suite exercises which verified claim. Every claim is owned by
//! exactly one suite; reports list the claims of their suite.

#[derive(Debug, Clone, Copy)]
pub struct Claim {
    pub id: &'static str,
    pub suite: &'static str,
    pub summary: &'static str,
}

pub const CLAIMS: &[Claim] = &[
    Claim {
        id: "ball-upper-bound-lemma",
        suite: "ball_bounds",
        summary: "ball metric below the (1+3d/r, 1+d/r) bracket expression",
    },
    Claim {
        id: "ball-lower-bound-lemma",
        suite: "ball_bounds",
        summary: "ball metric above sqrt(|vN|^2/4d^2 + |vT|^2/2rd)",
    },
    Claim {
        id: "tangent-ball-upper-estimate",
        suite: "ball_bounds",
        summary: "internally tangent ball dominates metrics with the ball comparison property",
    },
    Claim {
        id: "funk-hilbert-ball-coincidence",
        suite: "ball_bounds",
        summary: "Funk symmetrization equals the Beltrami-Klein metric on balls",
    },
    Claim {
        id: "half-space-qk-formula",
        suite: "halfspace_ball_qk",
        summary: "q_k on the half-space equals |v_1|/(2 x_1) for k < d",
    },
    Claim {
        id: "ball-qk-equality",
        suite: "halfspace_ball_qk",
        summary: "q_k on the ball equals q_1 for k < d",
    },
    Claim {
        id: "qk-order-monotonicity",
        suite: "halfspace_ball_qk",
        summary: "q_k is nondecreasing in the subspace order k",
    },
    Claim {
        id: "half-space-minimal-metric",
        suite: "halfspace_ball_qk",
        summary: "half-space minimal metric |v_N|/(2 delta) closed form",
    },
    Claim {
        id: "two-sided-intrinsic-estimate",
        suite: "sandwich",
        summary: "intrinsic distance sandwiched between d_{c2} and d_{C2} in a collar",
    },
    Claim {
        id: "far-point-lower-bound",
        suite: "sandwich",
        summary: "escaping a neighborhood costs at least log(1/delta)/2 - B",
    },
    Claim {
        id: "vertical-fiber-length",
        suite: "sandwich",
        summary: "normal fiber segments have length |log(h1/h2)| up to a constant",
    },
    Claim {
        id: "equidistant-path-length",
        suite: "sandwich",
        summary: "inward-offset boundary paths cost at most A |feet| / sqrt(delta0)",
    },
    Claim {
        id: "bound-template-shapes",
        suite: "sandwich",
        summary: "two-sided template expressions bracket the ball metric",
    },
    Claim {
        id: "quasi-distance-definition",
        suite: "quasidistance",
        summary: "the gauge a(x,y) and d_c = 2 log(1 + c a)",
    },
    Claim {
        id: "quasi-distance-properties",
        suite: "quasidistance",
        summary: "monotone in c, a distance for c >= 1, quasi-distance always",
    },
    Claim {
        id: "boundary-projection-frames",
        suite: "quasidistance",
        summary: "unique projection frames: reconstruction and unit normals",
    },
    Claim {
        id: "rigidity-characterization",
        suite: "rigidity",
        summary: "delta_1 = delta_{d-1} exactly on balls, half-spaces, slabs; fails elsewhere",
    },
    Claim {
        id: "gromov-hyperbolicity",
        suite: "gromov",
        summary: "four-point constants of q_k distances stay bounded",
    },
    Claim {
        id: "finsler-length-and-intrinsic-distance",
        suite: "gromov",
        summary: "length functional and graph approximation of the intrinsic distance",
    },
    Claim {
        id: "strong-localization",
        suite: "localization",
        summary: "k_{D cap U} <= (1 + C delta) k_D near strictly convex points",
    },
    Claim {
        id: "kh-decreasing-property",
        suite: "localization",
        summary: "larger domains have smaller Kobayashi-Hilbert metrics",
    },
    Claim {
        id: "convexity-classifier",
        suite: "classifier",
        summary: "tangential Hessian eigenvalue counts: strong / k-strong / minimal convexity",
    },
    Claim {
        id: "deltak-sqrt-growth",
        suite: "classifier",
        summary: "delta_k bounded by a multiple of sqrt(delta) at k-strongly convex points",
    },
];

pub fn claims_for(suite: &str) -> Vec<&'static str> {
    CLAIMS
        .iter()
        .filter(|c| c.suite == suite)
        .map(|c| c.id)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn claims_are_unique_and_owned_by_known_suites() {
        let mut seen = BTreeSet::new();
        for claim in CLAIMS {
            assert!(seen.insert(claim.id), "duplicate claim {}", claim.id);
            assert!(
                crate::suites::SUITE_NAMES.contains(&claim.suite),
                "unknown suite {}",
                claim.suite
            );
        }
        // and every suite owns at least one claim
        for suite in crate::suites::SUITE_NAMES {
            assert!(
                CLAIMS.iter().any(|c| c.suite == *suite),
                "suite {suite} owns no claims"
            );
        }
    }
}
