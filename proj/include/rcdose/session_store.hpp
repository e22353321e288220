#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "rcdose/trial_session.hpp"

namespace rcdose {

/// Appends journal entries to `<dir>/<id>.jsonl`, one JSON object per line,
/// flushing each append to stable storage.
void append_journal(const std::filesystem::path& file, const std::vector<JournalEntry>& entries);
std::vector<JournalEntry> read_journal(const std::filesystem::path& file);

/// Owns the live sessions. Mutations on one trial are serialised; readers get
/// immutable snapshots and never wait on a writer of another trial.
class SessionStore {
 public:
  using Snapshot = std::shared_ptr<const TrialSession>;

  /// With no directory the store is memory-only.
  explicit SessionStore(std::optional<std::filesystem::path> dir = std::nullopt);

  /// Replays every journal file in the directory. Returns the number loaded.
  std::size_t load_all();

  Snapshot create(const ProtocolConfig& config, int doses);
  /// nullptr for an unknown id.
  Snapshot get(const std::string& id) const;
  /// Throws std::out_of_range for an unknown id, SessionError otherwise.
  Snapshot record(const std::string& id, int size, int dlts);
  Snapshot undo(const std::string& id);
  std::vector<std::string> ids() const;

  std::optional<std::filesystem::path> journal_path(const std::string& id) const;

 private:
  struct Slot {
    std::mutex write;  // held for a whole mutation, journal append included
    std::mutex guard;  // held only to copy or swap `current`
    Snapshot current;

    Snapshot load() {
      std::lock_guard lock(guard);
      return current;
    }
    void store(Snapshot next) {
      std::lock_guard lock(guard);
      current = std::move(next);
    }
  };

  std::shared_ptr<Slot> slot(const std::string& id) const;
  template <class Op>
  Snapshot mutate(const std::string& id, Op op);
  std::string fresh_id();

  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex index_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
};

}  // namespace rcdose
