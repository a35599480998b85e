"""
Exact inductive-limit groups, their length functions and ball geometry.
"""
from .base import BaseGroupFamily, GroupElement
from .scales import Scale
from .solenoid import SolenoidGroup
from .roots_of_unity import RootsOfUnityGroup, FiniteTowerGroup, validate_tower
from .lengths import Combinator, LengthFunction, level, length_F, length_H, combine
from .balls import (
    Ball, DoublingReport, DoublingRow, HausdorffReport,
    enumerate_ball, doubling_report, hausdorff_subgroup_distance,
)

__all__ = [
    'BaseGroupFamily',
    'GroupElement',
    'Scale',
    'SolenoidGroup',
    'RootsOfUnityGroup',
    'FiniteTowerGroup',
    'validate_tower',
    'Combinator',
    'LengthFunction',
    'level',
    'length_F',
    'length_H',
    'combine',
    'Ball',
    'DoublingReport',
    'DoublingRow',
    'HausdorffReport',
    'enumerate_ball',
    'doubling_report',
    'hausdorff_subgroup_distance',
]
