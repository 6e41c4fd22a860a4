//! Algorithm selection: named solvers per problem and an `auto` mode that
//! tries the cheapest applicable exact method first.

use std::fmt;
use std::str::FromStr;

use crate::control::{
    solve_ccadc_colorcoding, solve_ccadv_additive_fpt, solve_ccadv_thiele_fpt, solve_ccav_mav_fpt, solve_ccdv_mav_poly,
    solve_control_bruteforce, ControlInstance, ControlSolution, ControlType, HashMode,
};
use crate::error::{Error, Result};
use crate::manipulation::{
    solve_av_const_manipulators, solve_manipulation_bruteforce, solve_manipulation_fpt_m_additive,
    solve_manipulation_fpt_m_av, solve_savnsav_const_manipulators, solve_sdcm_fpt_m, BallotProfile,
    ManipulationInstance, Variant,
};
use crate::model::Rule;
use crate::verdict::Verdict;
use crate::winners::{j_cc, JccAlgo, JccInstance};

/// A verdict together with the algorithm that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solved<W> {
    pub verdict: Verdict<W>,
    pub algo: &'static str,
}

macro_rules! named_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn name(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                $name::ALL
                    .iter()
                    .copied()
                    .find(|a| a.name() == s)
                    .ok_or_else(|| Error::Config(format!("unknown algorithm `{s}`")))
            }
        }
    };
}

named_enum!(
    /// Manipulation solvers.
    ManipAlgo {
        Auto => "auto",
        BruteForce => "brute-force",
        AvBlocks => "av-blocks",
        SavNsavTables => "sav-nsav-tables",
        CommonBallots => "common-ballots",
        CollectionPrograms => "collection-programs",
        SdcmPrograms => "sdcm-programs",
    }
);

named_enum!(
    /// Control solvers.
    ControlAlgo {
        Auto => "auto",
        BruteForce => "brute-force",
        CcdvMav => "ccdv-mav",
        CcavMav => "ccav-mav",
        AdditivePrograms => "additive-programs",
        ThielePrograms => "thiele-programs",
        ColorCoding => "color-coding",
        ColorCodingRandomized => "color-coding-randomized",
    }
);

named_enum!(
    /// J-CC solvers.
    JccChoice {
        Auto => "auto",
        BruteForce => "brute-force",
        FptN => "fpt-n",
    }
);

fn skippable(e: &Error) -> bool {
    matches!(e, Error::Unsupported(_) | Error::CapExceeded(_))
}

type Step<'a, I, W> = (&'static str, &'a dyn Fn(&I) -> Result<Verdict<W>>);

/// Runs `chain` in order, moving on when a solver does not apply or hits its cap.
fn first_applicable<I, W>(inst: &I, chain: &[Step<'_, I, W>]) -> Result<Solved<W>> {
    let mut last = None;
    for (name, solver) in chain {
        match solver(inst) {
            Ok(verdict) => return Ok(Solved { verdict, algo: name }),
            Err(e) if skippable(&e) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::Unsupported("no applicable algorithm".into())))
}

pub fn solve_manipulation(inst: &ManipulationInstance, algo: ManipAlgo) -> Result<Solved<BallotProfile>> {
    type Solver<'a> = (&'static str, &'a dyn Fn(&ManipulationInstance) -> Result<Verdict<BallotProfile>>);
    let brute: Solver = ("brute-force", &solve_manipulation_bruteforce);
    let blocks: Solver = ("av-blocks", &solve_av_const_manipulators);
    let tables: Solver = ("sav-nsav-tables", &solve_savnsav_const_manipulators);
    let common: Solver = ("common-ballots", &solve_manipulation_fpt_m_av);
    let programs: Solver = ("collection-programs", &solve_manipulation_fpt_m_additive);
    let sdcm: Solver = ("sdcm-programs", &solve_sdcm_fpt_m);
    let chain: Vec<Solver> = match algo {
        ManipAlgo::Auto => {
            let sd = inst.variant == Variant::Sdcm;
            match &inst.rule {
                _ if sd && inst.rule.is_additive() => vec![sdcm, brute],
                Rule::Av => vec![blocks, common, brute],
                Rule::Sav | Rule::Nsav => vec![tables, programs, brute],
                _ => vec![brute],
            }
        }
        ManipAlgo::BruteForce => vec![brute],
        ManipAlgo::AvBlocks => vec![blocks],
        ManipAlgo::SavNsavTables => vec![tables],
        ManipAlgo::CommonBallots => vec![common],
        ManipAlgo::CollectionPrograms => vec![programs],
        ManipAlgo::SdcmPrograms => vec![sdcm],
    };
    first_applicable(inst, &chain)
}

pub fn solve_control(inst: &ControlInstance, algo: ControlAlgo, seed: u64) -> Result<Solved<ControlSolution>> {
    type Solver<'a> = (&'static str, &'a dyn Fn(&ControlInstance) -> Result<Verdict<ControlSolution>>);
    let randomized =
        move |i: &ControlInstance| solve_ccadc_colorcoding(i, HashMode::Randomized { seed, repetitions: 8 });
    let exhaustive = |i: &ControlInstance| solve_ccadc_colorcoding(i, HashMode::Exhaustive);
    let brute: Solver = ("brute-force", &solve_control_bruteforce);
    let ccdv: Solver = ("ccdv-mav", &solve_ccdv_mav_poly);
    let ccav: Solver = ("ccav-mav", &solve_ccav_mav_fpt);
    let additive: Solver = ("additive-programs", &solve_ccadv_additive_fpt);
    let thiele: Solver = ("thiele-programs", &solve_ccadv_thiele_fpt);
    let coloring: Solver = ("color-coding", &exhaustive);
    let coloring_random: Solver = ("color-coding-randomized", &randomized);
    let chain: Vec<Solver> = match algo {
        ControlAlgo::Auto => match (inst.kind, &inst.rule) {
            (ControlType::Ccdv, Rule::Mav) => vec![ccdv, brute],
            (ControlType::Ccav, Rule::Mav) => vec![ccav, brute],
            (kind, rule) if kind.on_voters() && rule.is_additive() => vec![additive, brute],
            (kind, rule) if kind.on_voters() && rule.is_thiele() => vec![thiele, brute],
            (kind, _) if !kind.on_voters() => vec![coloring, brute],
            _ => vec![brute],
        },
        ControlAlgo::BruteForce => vec![brute],
        ControlAlgo::CcdvMav => vec![ccdv],
        ControlAlgo::CcavMav => vec![ccav],
        ControlAlgo::AdditivePrograms => vec![additive],
        ControlAlgo::ThielePrograms => vec![thiele],
        ControlAlgo::ColorCoding => vec![coloring],
        ControlAlgo::ColorCodingRandomized => vec![coloring_random],
    };
    first_applicable(inst, &chain)
}

/// J-CC with the algorithm used; `auto` reads the threshold partition for additive rules.
pub fn solve_jcc(rule: &Rule, inst: &JccInstance, choice: JccChoice) -> Result<(bool, &'static str)> {
    match choice {
        JccChoice::Auto if rule.is_additive() => Ok((j_cc(rule, inst, JccAlgo::Auto)?, "partition")),
        JccChoice::Auto | JccChoice::BruteForce => Ok((j_cc(rule, inst, JccAlgo::BruteForce)?, "brute-force")),
        JccChoice::FptN => Ok((j_cc(rule, inst, JccAlgo::FptN)?, "fpt-n")),
    }
}
