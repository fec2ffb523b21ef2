"""Lexer, parser, syntax tree and renderer."""

from . import ast
from .lexer import Token, tokenize
from .parser import parse
from .render import render

__all__ = ["ast", "Token", "tokenize", "parse", "render"]
