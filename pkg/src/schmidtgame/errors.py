class ConfigurationError(ValueError):
    """Parameters, arenas or inputs that violate a documented precondition."""


class IllegalMoveError(RuntimeError):
    """A strategy produced a move that breaks the game rules.

    Carries the round number, the offending role and the exact slack of the
    violated inequality (negative when the inequality fails).
    """

    def __init__(self, round_no, role, slack, reason):
        self.round = round_no
        self.role = role
        self.slack = slack
        self.reason = reason
        super().__init__(f"round {round_no}: illegal {role} move ({reason}; slack {slack})")


class InvariantViolation(AssertionError):
    """A proof-side guarantee failed to hold on a concrete transcript."""
