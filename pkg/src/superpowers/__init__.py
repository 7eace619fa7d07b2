"""Sums of superpowers: evaluation, omega-boundedness classification and witness chains."""
