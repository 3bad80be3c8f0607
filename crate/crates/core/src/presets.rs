//! Fixed five-player deals with scripted nights, used for controlled experiments.

use std::collections::BTreeMap;

use crate::game::{Assignment, GameSpec};
use crate::night::NightActionKind;
use crate::role::{PlayerId, RoleCard};

/// A fixed deal plus the night actions every woken player takes.
#[derive(Clone, Debug, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub spec: GameSpec,
    pub initial: Assignment,
    pub night: BTreeMap<PlayerId, NightActionKind>,
}

fn p(k: u8) -> PlayerId {
    PlayerId(k - 1)
}

/// Werewolf, Villager and Insomniac in the pool; the Troublemaker gets robbed.
pub fn easy() -> Preset {
    use NightActionKind::*;
    use RoleCard::*;
    let spec = GameSpec::new(
        vec![Troublemaker, Werewolf, Seer, Robber, Villager, Werewolf, Villager, Insomniac],
        5,
        0,
    );
    let initial = Assignment::new(
        vec![Troublemaker, Werewolf, Seer, Robber, Villager],
        [Werewolf, Villager, Insomniac],
    );
    let night = BTreeMap::from([
        (p(1), TroublemakerSwap(p(3), p(5))),
        (p(2), WerewolfPeek),
        (p(3), SeerCheckPlayer(p(4))),
        (p(4), RobberSwitch(p(1))),
        (p(5), NoAction),
    ]);
    Preset { name: "easy", spec, initial, night }
}

/// Werewolf and two Villagers in the pool; the lone Werewolf gets robbed.
pub fn hard() -> Preset {
    use NightActionKind::*;
    use RoleCard::*;
    let spec = GameSpec::new(
        vec![Robber, Insomniac, Seer, Werewolf, Troublemaker, Werewolf, Villager, Villager],
        5,
        0,
    );
    let initial = Assignment::new(
        vec![Robber, Insomniac, Seer, Werewolf, Troublemaker],
        [Werewolf, Villager, Villager],
    );
    let night = BTreeMap::from([
        (p(1), RobberSwitch(p(4))),
        (p(2), InsomniacPeek),
        (p(3), SeerCheckPlayer(p(4))),
        (p(4), WerewolfPeek),
        (p(5), TroublemakerSwap(p(2), p(3))),
    ]);
    Preset { name: "hard", spec, initial, night }
}

pub fn by_name(name: &str) -> Option<Preset> {
    match name.to_ascii_lowercase().as_str() {
        "easy" => Some(easy()),
        "hard" => Some(hard()),
        _ => None,
    }
}
