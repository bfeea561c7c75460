"""State families - one adapter per joint state, behind a common interface."""

from abc import ABC, abstractmethod
from typing import Dict, List, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike

from ..schema import Family, StateParams
from . import states
from .fock_basis import DensityMatrix, outer


Components = List[Tuple[float, np.ndarray]]


class StateFamily(ABC):
    """Abstract base class for the joint Alice-Bob state families.

    A family knows which parameter it is swept over and how to write itself as
    a convex mixture of pure lifted states, which is all the oracle path needs.
    """

    @property
    @abstractmethod
    def name(self) -> Family:
        """Return the family identifier."""

    @abstractmethod
    def components(self, params: StateParams, gammas: ArrayLike) -> Components:
        """Return (weight, amplitude rows of shape (len(gammas), 32)) pairs."""

    @property
    def parameter(self) -> str:
        return self.name.parameter

    def density(self, params: StateParams, gamma: float) -> DensityMatrix:
        """The validated 32-dim density matrix at one gamma."""
        terms = self.components(params, [gamma])
        if len(terms) == 1:
            return outer(terms[0][1][0])
        return states.mixture_of(terms)


class _PureFamily(StateFamily):
    _builders = {
        Family.PHI_PLUS: states.phi_plus_rows,
        Family.PHI_MINUS: states.phi_minus_rows,
        Family.PHI_STAR: states.phi_star_rows,
    }

    def components(self, params: StateParams, gammas: ArrayLike) -> Components:
        rows = self._builders[self.name](params.require(self.name), gammas, params.q_r)
        return [(1.0, rows)]


class PhiPlus(_PureFamily):
    name = Family.PHI_PLUS


class PhiMinus(_PureFamily):
    name = Family.PHI_MINUS


class PhiStar(_PureFamily):
    name = Family.PHI_STAR


class Werner(StateFamily):
    name = Family.WERNER

    def components(self, params: StateParams, gammas: ArrayLike) -> Components:
        return states.werner_components(params.require(self.name), gammas, params.q_r)


class WernerLike(StateFamily):
    name = Family.WERNER_LIKE

    def components(self, params: StateParams, gammas: ArrayLike) -> Components:
        return states.werner_like_components(params.require(self.name), gammas, params.q_r)


_FAMILIES: Dict[Family, StateFamily] = {
    family.name: family for family in (PhiPlus(), PhiMinus(), PhiStar(), Werner(), WernerLike())
}


def get_family(name: Union[str, Family]) -> StateFamily:
    """Resolve a family from its enum value or a CLI spelling like ``phi-plus``."""
    family = name if isinstance(name, Family) else Family.parse(name)
    return _FAMILIES[family]
