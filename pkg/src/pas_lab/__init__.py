"""Finite partial applicative structures: properties, entailment and order."""

from .classify import ClassLabel, Summary, classify
from .core import FinitePas, app, eval_term, format_table, parse_table, parse_term, read_table
from .entail import entails, entails_indexed, implication_set
from .errors import CapacityError, ConsistencyError, InputError, ParseError, PasError, PreconditionError
from .props import Prop, check_property, holds, property_profile

__version__ = "0.1.0"
