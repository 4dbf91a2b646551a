//! Complete exact case analysis of 2x2x2 games.
//!
//! Profiles with at least one pure player reduce to 2x2 bimatrix
//! enumeration plus an exact best-response check for the fixed player;
//! degenerate reductions yield interval components. Completely mixed
//! candidates reduce to three bilinear indifference equations; eliminating
//! two variables leaves a univariate quadratic whose roots in (0,1) are
//! certified present or absent by exact sign tests, with rational-interval
//! enclosures when the roots are irrational.

use super::{enumerate_nash_bimatrix, NashError, NashReport};
use crate::equilibrium::is_nash;
use crate::game::{Game, PureProfile};
use crate::rational::{rational_sqrt, Rational};
use crate::strategy::MixedProfile;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// An equilibrium component of a 2x2x2 game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Component {
    /// One player mixes anywhere in a closed probability interval (given as
    /// the probability of her second strategy) while the other two play the
    /// listed pure strategies.
    Interval {
        player: usize,
        prob_second: (Rational, Rational),
        others: Vec<(usize, usize)>,
    },
    /// Every mixed profile of the game is an equilibrium.
    FullCube,
}

/// How the completely mixed case resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootStatus {
    /// Certified: no completely mixed equilibrium exists.
    Empty,
    /// All completely mixed equilibria are rational and listed exactly.
    Rational,
    /// Completely mixed equilibria exist at irrational roots, certified by
    /// isolating intervals.
    Irrational,
    /// An indifference holds identically; the completely mixed solutions
    /// form a continuum and are not enumerated pointwise.
    Continuum,
}

/// The eliminated univariate quadratic and its root certificates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticCaseResult {
    /// Coefficients `[c0, c1, c2]` of `c0 + c1 t + c2 t^2` in the second
    /// player's second-strategy probability, normalized to primitive
    /// integers with positive leading coefficient. Present whenever the
    /// generic elimination path applies.
    pub quadratic: Option<[Rational; 3]>,
    pub status: RootStatus,
    /// Isolating intervals for irrational completely mixed equilibria (the
    /// second player's mixing probability brackets the root; the other two
    /// probabilities are rational functions of it).
    pub certified: Vec<(Rational, Rational)>,
}

/// Full report of the 2x2x2 analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeAnalysis {
    pub report: NashReport,
    pub components: Vec<Component>,
    pub quadratic: QuadraticCaseResult,
    /// True when the analysis certifies a single equilibrium and nothing
    /// else: no components, no completely mixed solutions beyond the list.
    pub unique: bool,
}

/// `k + u*x + v*y + uv*x*y` over exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bilinear {
    k: Rational,
    u: Rational,
    v: Rational,
    uv: Rational,
}

impl Bilinear {
    fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        &self.k + &self.u * x + &self.v * y + &self.uv * x * y
    }

    fn is_zero_poly(&self) -> bool {
        self.k.is_zero() && self.u.is_zero() && self.v.is_zero() && self.uv.is_zero()
    }

    /// Restricts the first variable to a constant, leaving `p + q*y`.
    fn pin_first(&self, x: &Rational) -> (Rational, Rational) {
        (&self.k + &self.u * x, &self.v + &self.uv * x)
    }

    /// Restricts the second variable to a constant, leaving `p + q*x`.
    fn pin_second(&self, y: &Rational) -> (Rational, Rational) {
        (&self.k + &self.v * y, &self.u + &self.uv * y)
    }
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// The payoff advantage of player `i`'s second strategy over her first, as
/// a bilinear form in the other two players' second-strategy probabilities
/// (lower player index first).
fn indifference_form(game: &Game, i: usize) -> Bilinear {
    let (j, k) = others(i);
    let diff = |sj: usize, sk: usize| -> Rational {
        let mut hi = vec![0usize; 3];
        hi[i] = 1;
        hi[j] = sj;
        hi[k] = sk;
        let mut lo = hi.clone();
        lo[i] = 0;
        game.payoff(i, &PureProfile(hi)) - game.payoff(i, &PureProfile(lo))
    };
    let d00 = diff(0, 0);
    let d10 = diff(1, 0);
    let d01 = diff(0, 1);
    let d11 = diff(1, 1);
    Bilinear {
        u: &d10 - &d00,
        v: &d01 - &d00,
        uv: &d11 - &d10 - &d01 + &d00,
        k: d00,
    }
}

fn in_open_unit(r: &Rational) -> bool {
    r.is_positive() && *r < Rational::one()
}

/// Roots of `p + q*t = 0`.
enum LinSol {
    Point(Rational),
    Any,
    Empty,
}

fn solve_linear(p: &Rational, q: &Rational) -> LinSol {
    if q.is_zero() {
        if p.is_zero() {
            LinSol::Any
        } else {
            LinSol::Empty
        }
    } else {
        LinSol::Point(-(p / q))
    }
}

#[derive(Debug, Default)]
struct MixedSolution {
    points: Vec<[Rational; 3]>,
    certified: Vec<(Rational, Rational)>,
    continuum: bool,
    quadratic: Option<[Rational; 3]>,
}

impl MixedSolution {
    fn push_point(&mut self, t: [Rational; 3]) {
        if t.iter().all(in_open_unit) && !self.points.contains(&t) {
            self.points.push(t);
        }
    }
}

/// Solves the remaining system after pinning one variable to a rational
/// value in (0,1). Every returned point satisfies all three equations
/// exactly.
fn solve_pinned(d: &[Bilinear; 3], var: usize, val: &Rational, out: &mut MixedSolution) {
    // the two equations not indexed by `var` become linear in a single
    // unknown each; the equation indexed by `var` stays bilinear
    let mut sols: [Option<LinSol>; 3] = [None, None, None];
    for a in 0..3 {
        if a == var {
            continue;
        }
        let (j, k) = others(a);
        // `var` is one of (j, k); the other is a's remaining unknown
        let (p, q, unknown) = if j == var {
            let (p, q) = d[a].pin_first(val);
            (p, q, k)
        } else {
            let (p, q) = d[a].pin_second(val);
            (p, q, j)
        };
        sols[unknown] = Some(solve_linear(&p, &q));
    }
    let (o1, o2) = others(var);
    let s1 = sols[o1].take().expect("both unknowns covered");
    let s2 = sols[o2].take().expect("both unknowns covered");

    let assemble = |v1: &Rational, v2: &Rational| -> [Rational; 3] {
        let mut t = [Rational::zero(), Rational::zero(), Rational::zero()];
        t[var] = val.clone();
        t[o1] = v1.clone();
        t[o2] = v2.clone();
        t
    };

    match (s1, s2) {
        (LinSol::Empty, _) | (_, LinSol::Empty) => {}
        (LinSol::Point(v1), LinSol::Point(v2)) => {
            // d[var] is bilinear in (o1, o2) with o1 < o2 by construction
            if d[var].eval(&v1, &v2).is_zero() {
                out.push_point(assemble(&v1, &v2));
            }
        }
        (LinSol::Point(v1), LinSol::Any) => {
            let (p, q) = d[var].pin_first(&v1);
            match solve_linear(&p, &q) {
                LinSol::Point(v2) => out.push_point(assemble(&v1, &v2)),
                LinSol::Any => out.continuum = true,
                LinSol::Empty => {}
            }
        }
        (LinSol::Any, LinSol::Point(v2)) => {
            let (p, q) = d[var].pin_second(&v2);
            match solve_linear(&p, &q) {
                LinSol::Point(v1) => out.push_point(assemble(&v1, &v2)),
                LinSol::Any => out.continuum = true,
                LinSol::Empty => {}
            }
        }
        (LinSol::Any, LinSol::Any) => {
            // a full bilinear equation in two free unknowns
            out.continuum = true;
        }
    }
}

/// Scales a polynomial to primitive integer coefficients with positive
/// leading coefficient.
fn normalize_primitive(q: [Rational; 3]) -> [Rational; 3] {
    let mut den_lcm = BigInt::one();
    let mut num_gcd = BigInt::zero();
    for c in &q {
        if !c.is_zero() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
    }
    if num_gcd.is_zero() {
        return q;
    }
    let scale = Rational::new(den_lcm, num_gcd);
    let lead_negative = q
        .iter()
        .rev()
        .find(|c| !c.is_zero())
        .map(|c| (c * &scale).is_negative())
        .unwrap_or(false);
    let scale = if lead_negative { -scale } else { scale };
    [&q[0] * &scale, &q[1] * &scale, &q[2] * &scale]
}

fn eval_quad(q: &[Rational; 3], t: &Rational) -> Rational {
    &q[0] + &q[1] * t + &q[2] * t * t
}

/// Linear polynomial `c + s*t` as a pair.
type Lin = (Rational, Rational);

fn lin_eval(l: &Lin, t: &Rational) -> Rational {
    &l.0 + &l.1 * t
}

/// Completely mixed equilibria of the system d_0 = d_1 = d_2 = 0 on the
/// open cube.
fn solve_completely_mixed(d: &[Bilinear; 3]) -> Result<MixedSolution, NashError> {
    let mut out = MixedSolution::default();

    let zero_count = d.iter().filter(|b| b.is_zero_poly()).count();
    if zero_count > 0 {
        // some player is indifferent identically; solution sets are unions
        // of curves or worse and are reported as a continuum, not points
        out.continuum = true;
        return Ok(out);
    }

    // d_0 must determine t_2 from t_1; otherwise it pins t_1 directly
    if d[0].v.is_zero() && d[0].uv.is_zero() {
        match solve_linear(&d[0].k, &d[0].u) {
            LinSol::Empty => return Ok(out),
            LinSol::Any => unreachable!("zero polynomial handled above"),
            LinSol::Point(t1) => {
                if in_open_unit(&t1) {
                    solve_pinned(d, 1, &t1, &mut out);
                }
                return Ok(out);
            }
        }
    }
    // d_1 must determine t_0 from t_2; otherwise it pins t_2 directly
    if d[1].u.is_zero() && d[1].uv.is_zero() {
        match solve_linear(&d[1].k, &d[1].v) {
            LinSol::Empty => return Ok(out),
            LinSol::Any => unreachable!(),
            LinSol::Point(t2) => {
                if in_open_unit(&t2) {
                    solve_pinned(d, 2, &t2, &mut out);
                }
                return Ok(out);
            }
        }
    }

    // t_2 = nz/dz as a function of t = t_1 (from d_0)
    let nz: Lin = (-d[0].k.clone(), -d[0].u.clone());
    let dz: Lin = (d[0].v.clone(), d[0].uv.clone());
    // t_0 = nx/dx as a function of t (from d_1 after substituting t_2)
    let nx: Lin = (
        -(&d[1].k * &dz.0) - &d[1].v * &nz.0,
        -(&d[1].k * &dz.1) - &d[1].v * &nz.1,
    );
    let dx: Lin = (
        &d[1].u * &dz.0 + &d[1].uv * &nz.0,
        &d[1].u * &dz.1 + &d[1].uv * &nz.1,
    );

    // extra solutions where an elimination denominator vanishes entirely
    if !d[0].uv.is_zero() {
        let pole = -(&d[0].v / &d[0].uv);
        if lin_eval(&nz, &pole).is_zero() && in_open_unit(&pole) {
            solve_pinned(d, 1, &pole, &mut out);
        }
    }
    if !d[1].uv.is_zero() {
        let t2_pole = -(&d[1].u / &d[1].uv);
        if (&d[1].k + &d[1].v * &t2_pole).is_zero() && in_open_unit(&t2_pole) {
            solve_pinned(d, 2, &t2_pole, &mut out);
        }
    }

    if dx.0.is_zero() && dx.1.is_zero() {
        // t_0 drops out; d_1 restricted to the d_0 curve pins t alone
        match solve_linear(&nx.0, &nx.1) {
            LinSol::Empty => return Ok(out),
            LinSol::Any => {
                out.continuum = true;
                return Ok(out);
            }
            LinSol::Point(t1) => {
                if in_open_unit(&t1) {
                    solve_pinned(d, 1, &t1, &mut out);
                }
                return Ok(out);
            }
        }
    }

    // substitute into d_2(t_0, t_1) and clear the denominator
    let q_raw = [
        &d[2].k * &dx.0 + &d[2].u * &nx.0,
        &d[2].k * &dx.1 + &d[2].u * &nx.1 + &d[2].v * &dx.0 + &d[2].uv * &nx.0,
        &d[2].v * &dx.1 + &d[2].uv * &nx.1,
    ];
    let q = normalize_primitive(q_raw);
    out.quadratic = Some(q.clone());

    if q.iter().all(Rational::is_zero) {
        out.continuum = true;
        return Ok(out);
    }

    if q[2].is_zero() {
        if q[1].is_zero() {
            return Ok(out); // nonzero constant: no roots
        }
        let root = -(&q[0] / &q[1]);
        if in_open_unit(&root) {
            solve_pinned(d, 1, &root, &mut out);
        }
        return Ok(out);
    }

    let disc = &q[1] * &q[1] - Rational::from_integer(4.into()) * &q[0] * &q[2];
    if disc.is_negative() {
        return Ok(out);
    }
    if let Some(s) = rational_sqrt(&disc) {
        let two_a = Rational::from_integer(2.into()) * &q[2];
        let mut roots = vec![(-&q[1] + &s) / &two_a];
        if !s.is_zero() {
            roots.push((-&q[1] - &s) / &two_a);
        }
        for root in roots {
            if in_open_unit(&root) {
                solve_pinned(d, 1, &root, &mut out);
            }
        }
        return Ok(out);
    }

    // irrational pair: isolate in (0,1) and certify the side conditions
    for interval in isolate_roots_in_unit(&q) {
        if let Some(cert) = certify_interval(&q, interval, &nz, &dz, &nx, &dx)? { out.certified.push(cert) }
    }
    Ok(out)
}

/// Isolating intervals inside (0,1) for the (irrational) roots of a true
/// quadratic with positive non-square discriminant. Signs at 0, 1 and the
/// vertex decide how many roots the interval holds.
fn isolate_roots_in_unit(q: &[Rational; 3]) -> Vec<(Rational, Rational)> {
    let zero = Rational::zero();
    let one = Rational::one();
    let q0 = eval_quad(q, &zero);
    let q1 = eval_quad(q, &one);
    debug_assert!(!q0.is_zero() && !q1.is_zero(), "irrational roots expected");
    let vertex = -(&q[1] / (Rational::from_integer(2.into()) * &q[2]));
    let mut intervals = Vec::new();
    if q0.is_positive() != q1.is_positive() {
        intervals.push((zero, one));
    } else if in_open_unit(&vertex) {
        let qv = eval_quad(q, &vertex);
        if !qv.is_zero() && qv.is_positive() != q0.is_positive() {
            intervals.push((zero, vertex.clone()));
            intervals.push((vertex, one));
        }
    }
    intervals
}

/// Shrinks an isolating interval until the dependent probabilities
/// t_2 = nz/dz and t_0 = nx/dx are certified strictly inside (0,1) (then
/// returns the interval) or strictly outside (then rejects the root). All
/// comparisons are exact; termination follows from the root being
/// irrational while every tested boundary value is rational.
fn certify_interval(
    q: &[Rational; 3],
    interval: (Rational, Rational),
    nz: &Lin,
    dz: &Lin,
    nx: &Lin,
    dx: &Lin,
) -> Result<Option<(Rational, Rational)>, NashError> {
    let (mut lo, mut hi) = interval;
    let mut sign_lo = eval_quad(q, &lo).is_positive();
    for _ in 0..256 {
        // reject/accept once every dependent value has constant sign data
        let mut decided = true;
        for (num, den) in [(nz, dz), (nx, dx)] {
            let dl = lin_eval(den, &lo);
            let dh = lin_eval(den, &hi);
            if dl.is_zero() || dh.is_zero() || dl.is_positive() != dh.is_positive() {
                decided = false; // pole inside; shrink further
                break;
            }
            // n/d is monotone on a pole-free interval; a constant map is
            // decided outright, otherwise the value at the interior root
            // lies strictly between the endpoint values
            let vl = lin_eval(num, &lo) / dl;
            let vh = lin_eval(num, &hi) / dh;
            let constant = (&num.1 * &den.0 - &num.0 * &den.1).is_zero();
            if constant {
                if in_open_unit(&vl) {
                    continue;
                }
                return Ok(None);
            }
            let (vmin, vmax) = if vl <= vh { (vl, vh) } else { (vh, vl) };
            if !vmin.is_negative() && vmax <= Rational::one() {
                continue; // root value strictly inside (0,1)
            }
            if !vmax.is_positive() || vmin >= Rational::one() {
                return Ok(None); // root value strictly outside
            }
            decided = false;
            break;
        }
        if decided {
            // also check the root is interior to (0,1): endpoints rational,
            // root irrational, so the open interval certificate suffices
            return Ok(Some((lo, hi)));
        }
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        let qm = eval_quad(q, &mid);
        debug_assert!(!qm.is_zero());
        if qm.is_positive() == sign_lo {
            lo = mid;
            sign_lo = qm.is_positive();
        } else {
            hi = mid;
        }
    }
    Err(NashError::Internal(
        "root certification did not converge".into(),
    ))
}

/// Runs the complete case analysis of a 2x2x2 game.
pub fn analyze_2x2x2(game: &Game) -> Result<CubeAnalysis, NashError> {
    if game.strategy_counts() != [2, 2, 2] {
        return Err(NashError::WrongShape("a 2x2x2 game"));
    }

    let d = [
        indifference_form(game, 0),
        indifference_form(game, 1),
        indifference_form(game, 2),
    ];

    // whole-cube degeneracy: every player indifferent at every profile
    if d.iter().all(Bilinear::is_zero_poly) {
        let mut equilibria: Vec<MixedProfile> = game
            .profiles()
            .map(|p| MixedProfile::pure(game.strategy_counts(), &p))
            .collect();
        super::sort_profiles(&mut equilibria);
        return Ok(CubeAnalysis {
            report: NashReport {
                equilibria,
                complete: true,
                degenerate: true,
                pairing: vec![],
            },
            components: vec![Component::FullCube],
            quadratic: QuadraticCaseResult {
                quadratic: None,
                status: RootStatus::Continuum,
                certified: vec![],
            },
            unique: false,
        });
    }

    let mut equilibria: Vec<MixedProfile> = Vec::new();
    let mut components: Vec<Component> = Vec::new();
    let mut incomplete = false;

    // case (a): some player pure
    for fixed in 0..3 {
        for pure in 0..2 {
            let (j, k) = others(fixed);
            let sub = subgame(game, fixed, pure, j, k);
            let rep = enumerate_nash_bimatrix(&sub)?;
            for e in &rep.equilibria {
                let full = assemble_profile(fixed, pure, j, e.strategy(0), k, e.strategy(1));
                if is_nash(game, &full)? {
                    equilibria.push(full);
                }
            }
            if rep.degenerate {
                if rep.equilibria.len() > 2 {
                    incomplete = true;
                }
                for a in 0..rep.equilibria.len() {
                    for b in a + 1..rep.equilibria.len() {
                        segment_component(
                            game,
                            fixed,
                            pure,
                            j,
                            k,
                            &rep.equilibria[a],
                            &rep.equilibria[b],
                            &mut equilibria,
                            &mut components,
                            &mut incomplete,
                        )?;
                    }
                }
            }
        }
    }

    // case (b): completely mixed
    let mixed = solve_completely_mixed(&d)?;
    for t in &mixed.points {
        let profile = MixedProfile::new(vec![
            vec![Rational::one() - &t[0], t[0].clone()],
            vec![Rational::one() - &t[1], t[1].clone()],
            vec![Rational::one() - &t[2], t[2].clone()],
        ])?;
        if !is_nash(game, &profile)? {
            return Err(NashError::Internal(
                "completely mixed candidate failed verification".into(),
            ));
        }
        equilibria.push(profile);
    }
    if mixed.continuum {
        incomplete = true;
    }

    super::sort_profiles(&mut equilibria);
    components.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    components.dedup();

    let status = if mixed.continuum {
        RootStatus::Continuum
    } else if !mixed.certified.is_empty() {
        RootStatus::Irrational
    } else if !mixed.points.is_empty() {
        RootStatus::Rational
    } else {
        RootStatus::Empty
    };
    let complete = !incomplete;
    let unique = complete
        && components.is_empty()
        && equilibria.len() == 1
        && mixed.certified.is_empty()
        && !mixed.continuum;

    Ok(CubeAnalysis {
        report: NashReport {
            equilibria,
            complete,
            degenerate: !components.is_empty() || incomplete,
            pairing: vec![],
        },
        components,
        quadratic: QuadraticCaseResult {
            quadratic: mixed.quadratic,
            status,
            certified: mixed.certified,
        },
        unique,
    })
}

fn subgame(game: &Game, fixed: usize, pure: usize, j: usize, k: usize) -> Game {
    let entry = |player: usize, sj: usize, sk: usize| -> Rational {
        let mut choices = vec![0usize; 3];
        choices[fixed] = pure;
        choices[j] = sj;
        choices[k] = sk;
        game.payoff(player, &PureProfile(choices)).clone()
    };
    let a = vec![
        vec![entry(j, 0, 0), entry(j, 0, 1)],
        vec![entry(j, 1, 0), entry(j, 1, 1)],
    ];
    let b = vec![
        vec![entry(k, 0, 0), entry(k, 0, 1)],
        vec![entry(k, 1, 0), entry(k, 1, 1)],
    ];
    Game::bimatrix(a, b).expect("2x2 shape")
}

fn assemble_profile(
    fixed: usize,
    pure: usize,
    j: usize,
    sigma_j: &[Rational],
    k: usize,
    sigma_k: &[Rational],
) -> MixedProfile {
    let mut strategies = vec![Vec::new(); 3];
    strategies[fixed] = {
        let mut v = vec![Rational::zero(), Rational::zero()];
        v[pure] = Rational::one();
        v
    };
    strategies[j] = sigma_j.to_vec();
    strategies[k] = sigma_k.to_vec();
    MixedProfile::new(strategies).expect("valid simplex components")
}

/// From two extreme subgame equilibria sharing one player's pure strategy,
/// derives the full-game interval component: the segment between them stays
/// a subgame equilibrium by linearity, and the fixed player's best-response
/// condition is linear along it.
#[allow(clippy::too_many_arguments)]
fn segment_component(
    game: &Game,
    fixed: usize,
    pure: usize,
    j: usize,
    k: usize,
    e1: &MixedProfile,
    e2: &MixedProfile,
    equilibria: &mut Vec<MixedProfile>,
    components: &mut Vec<Component>,
    incomplete: &mut bool,
) -> Result<(), NashError> {
    // identify the shared side
    let (shared_sub, moving_sub) = if e1.strategy(0) == e2.strategy(0) {
        (0usize, 1usize)
    } else if e1.strategy(1) == e2.strategy(1) {
        (1usize, 0usize)
    } else {
        return Ok(());
    };
    let shared_player = if shared_sub == 0 { j } else { k };
    let moving_player = if shared_sub == 0 { k } else { j };
    let shared_sigma = e1.strategy(shared_sub);
    let shared_pure = match (shared_sigma[0].is_one(), shared_sigma[1].is_one()) {
        (true, _) => 0usize,
        (_, true) => 1usize,
        _ => {
            // shared side is mixed: the component is not axis-described here
            *incomplete = true;
            return Ok(());
        }
    };
    let a = e1.strategy(moving_sub)[1].clone();
    let b = e2.strategy(moving_sub)[1].clone();
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };

    // fixed player's advantage of `pure` over the alternative, evaluated at
    // the endpoints; linear in the moving probability
    let phi = |t: &Rational| -> Result<Rational, NashError> {
        let mut strategies = vec![Vec::new(); 3];
        strategies[fixed] = vec![Rational::one(), Rational::zero()]; // placeholder
        strategies[moving_player] = vec![Rational::one() - t, t.clone()];
        strategies[shared_player] = {
            let mut v = vec![Rational::zero(), Rational::zero()];
            v[shared_pure] = Rational::one();
            v
        };
        let probe = MixedProfile::new(strategies)?;
        let own = crate::equilibrium::payoff_against(game, fixed, pure, &probe)?;
        let other = crate::equilibrium::payoff_against(game, fixed, 1 - pure, &probe)?;
        Ok(own - other)
    };
    let phi_lo = phi(&lo)?;
    let phi_hi = phi(&hi)?;

    match (phi_lo.is_negative(), phi_hi.is_negative()) {
        (true, true) => return Ok(()), // fixed player deviates everywhere
        (false, false) => {}
        (false, true) => {
            // threshold where phi crosses zero
            let t = &lo + (&hi - &lo) * &phi_lo / (&phi_lo - &phi_hi);
            hi = t;
        }
        (true, false) => {
            let t = &lo + (&hi - &lo) * &phi_lo / (&phi_lo - &phi_hi);
            lo = t;
        }
    }
    if lo == hi {
        let mut strategies = vec![Vec::new(); 3];
        strategies[fixed] = {
            let mut v = vec![Rational::zero(), Rational::zero()];
            v[pure] = Rational::one();
            v
        };
        strategies[moving_player] = vec![Rational::one() - &lo, lo.clone()];
        strategies[shared_player] = {
            let mut v = vec![Rational::zero(), Rational::zero()];
            v[shared_pure] = Rational::one();
            v
        };
        let point = MixedProfile::new(strategies)?;
        if is_nash(game, &point)? {
            equilibria.push(point);
        }
        return Ok(());
    }

    let mut other_list = vec![(fixed, pure), (shared_player, shared_pure)];
    other_list.sort();
    components.push(Component::Interval {
        player: moving_player,
        prob_second: (lo, hi),
        others: other_list,
    });
    Ok(())
}
