#include "rcdose/session_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <random>

#include "rcdose/json_codec.hpp"

namespace rcdose {

void append_journal(const std::filesystem::path& file, const std::vector<JournalEntry>& entries) {
  if (entries.empty()) return;
  std::string data;
  for (const JournalEntry& e : entries) data += Json(e).dump() + '\n';
  const int fd = ::open(file.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) throw std::runtime_error("open " + file.string() + ": " + std::strerror(errno));
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = ::write(fd, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      const std::string why = std::strerror(errno);
      ::close(fd);
      throw std::runtime_error("write " + file.string() + ": " + why);
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0) {
    const std::string why = std::strerror(errno);
    ::close(fd);
    throw std::runtime_error("fsync " + file.string() + ": " + why);
  }
  ::close(fd);
}

std::vector<JournalEntry> read_journal(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::vector<JournalEntry> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    try {
      out.push_back(Json::parse(line).get<JournalEntry>());
    } catch (const Json::exception& e) {
      throw SessionError(SessionError::Kind::malformed,
                         file.filename().string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

SessionStore::SessionStore(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {
  if (dir_) std::filesystem::create_directories(*dir_);
}

std::size_t SessionStore::load_all() {
  if (!dir_) return 0;
  std::size_t loaded = 0;
  for (const auto& entry : std::filesystem::directory_iterator(*dir_)) {
    if (entry.path().extension() != ".jsonl") continue;
    const std::string id = entry.path().stem().string();
    auto session = std::make_shared<const TrialSession>(
        replay_journal(read_journal(entry.path()), id));
    auto s = std::make_shared<Slot>();
    s->current = std::move(session);
    std::unique_lock lock(index_mutex_);
    slots_[id] = std::move(s);
    ++loaded;
  }
  return loaded;
}

std::string SessionStore::fresh_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  static constexpr char hex[] = "0123456789abcdef";
  std::string id(16, '0');
  for (char& c : id) c = hex[rng() & 0xf];
  return id;
}

std::optional<std::filesystem::path> SessionStore::journal_path(const std::string& id) const {
  if (!dir_) return std::nullopt;
  return *dir_ / (id + ".jsonl");
}

SessionStore::Snapshot SessionStore::create(const ProtocolConfig& config, int doses) {
  auto s = std::make_shared<Slot>();
  std::unique_lock lock(index_mutex_);
  std::string id;
  do id = fresh_id();
  while (slots_.count(id));
  s->current = std::make_shared<const TrialSession>(create_trial(config, doses, id));
  if (auto file = journal_path(id)) append_journal(*file, s->current->journal);
  slots_[id] = s;
  return s->current;
}

std::shared_ptr<SessionStore::Slot> SessionStore::slot(const std::string& id) const {
  std::shared_lock lock(index_mutex_);
  auto it = slots_.find(id);
  return it == slots_.end() ? nullptr : it->second;
}

SessionStore::Snapshot SessionStore::get(const std::string& id) const {
  auto s = slot(id);
  if (!s) return nullptr;
  return s->load();
}

template <class Op>
SessionStore::Snapshot SessionStore::mutate(const std::string& id, Op op) {
  auto s = slot(id);
  if (!s) throw std::out_of_range("unknown trial " + id);
  std::lock_guard lock(s->write);
  const Snapshot before = s->load();
  auto after = std::make_shared<const TrialSession>(op(*before));
  if (auto file = journal_path(id)) {
    std::vector<JournalEntry> added(after->journal.begin() + before->journal.size(),
                                    after->journal.end());
    append_journal(*file, added);
  }
  s->store(after);
  return after;
}

SessionStore::Snapshot SessionStore::record(const std::string& id, int size, int dlts) {
  return mutate(id, [&](const TrialSession& t) { return record_cohort(t, size, dlts); });
}

SessionStore::Snapshot SessionStore::undo(const std::string& id) {
  return mutate(id, [](const TrialSession& t) { return undo_last(t); });
}

std::vector<std::string> SessionStore::ids() const {
  std::shared_lock lock(index_mutex_);
  std::vector<std::string> out;
  for (const auto& [id, s] : slots_) out.push_back(id);
  return out;
}

}  // namespace rcdose
