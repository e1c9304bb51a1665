"""Special cycles on arithmetic quotients of signature (2,1), their exact theta lifts,
and numerical checks of the lifts."""

__version__ = "0.1.0"
