"""Separated-set entropy estimators and translocal entropy/pressure tools."""

__version__ = "0.1.0"
