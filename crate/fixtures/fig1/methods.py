"""Build helpers for the SCons configuration."""

import re
import subprocess


def clamp_0(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_1(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_2(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_3(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_4(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_5(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_6(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_7(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_8(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_9(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_10(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_11(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_12(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_13(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_14(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_15(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_16(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_17(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_18(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_19(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_20(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_21(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_22(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_23(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_24(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_25(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_26(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_27(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_28(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_29(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_30(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_31(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_32(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_33(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_34(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_35(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_36(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_37(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_38(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_39(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_40(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_41(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_42(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_43(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_44(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_45(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_46(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_47(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_48(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_49(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_50(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_51(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_52(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_53(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_54(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_55(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_56(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_57(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_58(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_59(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_60(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_61(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_62(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_63(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_64(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_65(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_66(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_67(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_68(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_69(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_70(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_71(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_72(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_73(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_74(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_75(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_76(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_77(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_78(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_79(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_80(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_81(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def clamp_82(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value



def get_compiler_version(env):
    """
    Returns an array of version numbers as ints: [major, minor, patch].
    The return array should have at least two values (major, minor).
    """
    # Not using -dumpversion as some GCC distros only return major.
    version = subprocess.check_output([env.subst(env["CXX"]), "--version"]).strip().decode("utf-8")
    if env.msvc:
        # MSVC prints its version through a different tool.
        return None

    match = re.search("[0-9]+\.[0-9.]+", version)
    if match is not None:
        return list(map(int, match.group().split(".")))
    else:
        return None
