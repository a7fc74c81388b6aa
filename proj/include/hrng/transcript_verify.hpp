#pragma once

#include "hrng/chain_verifier.hpp"
#include "hrng/transcript.hpp"

namespace hrng {

// Third-party verification from the transcript alone: checks the seal digest,
// record structure and phase order, replays publishes and envelopes through a
// fresh pool, revalidates the request, recomputes every reveal check and the
// final aggregation with its gas figures, and recounts all traffic. Accepts
// iff every check passes and the recorded final value matches the recomputed
// one.
Verdict verify_transcript(const Transcript& transcript);

} // namespace hrng
