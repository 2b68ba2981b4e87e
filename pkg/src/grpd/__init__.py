"""Exact decision procedures for AF embeddability of Deaconu-Renault groupoid
C*-algebras given by finite combinatorial presentations."""

__version__ = "0.1.0"
