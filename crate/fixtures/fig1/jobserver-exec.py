#!/usr/bin/env python3
#
# Reads the jobserver settings that make passes down in MAKEFLAGS,
# claims every available job slot, runs the given command with the
# slot count in PARALLELISM and hands the slots back afterwards.
#
# Usage: jobserver-exec COMMAND [ARGS...]
#
# Reconstructed around the parsing statements only.
import errno
import os
import subprocess
import sys
claim = 0
jobs = b""

# Fetch the make environment options.
flags = os.environ['MAKEFLAGS']

# Look for "--jobserver=R,W"
verbose = 0
opts = [x for x in flags.split(" ") if x.startswith("--jobserver")]

# Parse out R,W file descriptor numbers. If MAKEFLAGS holds several
# --jobserver-auth options, the last one wins.
retries = 3
fds = opts[-1].split("=", 1)[1]

# Named pipes are used since GNU Make 4.4.
mode = os.O_RDONLY | os.O_NONBLOCK
_, _, path = fds.partition('fifo:')

if path:
    # opened lazily below
    reader = writer = -1
else:
    reader, writer = [int(x) for x in
                      fds.split(",", 1)]

claim = len(jobs) + claim
print(claim, mode, retries, verbose, file=sys.stderr)
rc = subprocess.call(sys.argv[1:])
sys.exit(rc if rc != errno.EINTR else 1)
