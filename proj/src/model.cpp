/*
 * Copyright 2026 The coalex Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "coalex/model.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "coalex/dataset.hpp"
#include "coalex/error.hpp"

namespace coalex {

double QuadraticForm::operator()(std::span<const double> x) const {
  double s = c;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += a[i * n + j] * x[j];
    s += (b[i] + row) * x[i];
  }
  return s;
}

QuadraticForm& QuadraticForm::operator+=(const QuadraticForm& o) {
  if (o.n != n) throw_invalid("quadratic forms differ in dimension");
  c += o.c;
  for (int i = 0; i < n; ++i) b[i] += o.b[i];
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += o.a[k];
  return *this;
}

QuadraticForm& QuadraticForm::scale(double s) {
  c *= s;
  for (double& x : b) x *= s;
  for (double& x : a) x *= s;
  return *this;
}

double Model::predict_one(std::span<const double> x) const {
  double out = 0.0;
  predict(x, 1, {&out, 1});
  return out;
}

std::vector<double> Model::predict_all(std::span<const double> rows,
                                       std::size_t num_rows) const {
  std::vector<double> out(num_rows);
  predict(rows, num_rows, out);
  return out;
}

namespace {

void check_rows(std::span<const double> rows, std::size_t num_rows, std::span<double> out,
                int arity) {
  if (rows.size() != num_rows * static_cast<std::size_t>(arity) || out.size() < num_rows) {
    throw_invalid("prediction buffers do not match arity");
  }
}

class PolyParser {
 public:
  explicit PolyParser(const std::string& text) : s_(text) {}

  std::vector<PolynomialModel::Term> parse() {
    std::vector<PolynomialModel::Term> terms;
    skip();
    if (pos_ >= s_.size()) fail("empty expression");
    double sign = 1.0;
    if (peek('+')) {
      ++pos_;
    } else if (peek('-')) {
      ++pos_;
      sign = -1.0;
    }
    while (true) {
      auto t = term();
      t.coef *= sign;
      terms.push_back(std::move(t));
      skip();
      if (pos_ >= s_.size()) break;
      if (peek('+')) {
        sign = 1.0;
      } else if (peek('-')) {
        sign = -1.0;
      } else {
        fail("expected '+' or '-'");
      }
      ++pos_;
    }
    return terms;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw InputError("polynomial '" + s_ + "': " + what + " at position " +
                     std::to_string(pos_));
  }

  PolynomialModel::Term term() {
    PolynomialModel::Term t;
    t.coef = 1.0;
    factor(t);
    while (peek('*')) {
      ++pos_;
      factor(t);
    }
    return t;
  }

  int integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return std::stoi(s_.substr(start, pos_ - start));
  }

  void factor(PolynomialModel::Term& t) {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (s_[pos_] == 'x' || s_[pos_] == 'X') {
      ++pos_;
      const int var = integer();
      if (var < 1) fail("variables are numbered from 1");
      int power = 1;
      if (peek('^')) {
        ++pos_;
        power = integer();
      }
      t.powers.emplace_back(var - 1, power);
      return;
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
            s_[pos_] == 'e' || s_[pos_] == 'E' ||
            ((s_[pos_] == '-' || s_[pos_] == '+') && pos_ > start &&
             (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E')))) {
      ++pos_;
    }
    if (start == pos_) fail("expected a number or variable");
    try {
      t.coef *= parse_double(std::string_view(s_).substr(start, pos_ - start));
    } catch (const InputError&) {
      fail("bad number");
    }
  }

  std::string s_;
  std::size_t pos_ = 0;
};

std::string strip(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(0, 1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

}  // namespace

PolynomialModel::PolynomialModel(std::vector<Term> terms, int arity)
    : terms_(std::move(terms)), arity_(arity) {
  int needed = 0;
  for (const auto& t : terms_) {
    for (auto [v, p] : t.powers) {
      if (v < 0 || p < 0) throw_invalid("invalid monomial");
      needed = std::max(needed, v + 1);
    }
  }
  if (arity_ == 0) arity_ = needed;
  if (arity_ < needed) {
    throw InputError("polynomial uses x" + std::to_string(needed) + " but arity is " +
                     std::to_string(arity_));
  }
}

PolynomialModel PolynomialModel::parse(const std::string& text, int arity) {
  return PolynomialModel(PolyParser(text).parse(), arity);
}

std::string PolynomialModel::describe() const {
  std::ostringstream out;
  out << "poly:";
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const Term& t = terms_[k];
    if (k) out << (t.coef < 0 ? " - " : " + ");
    else if (t.coef < 0) out << '-';
    out << format_double(std::abs(t.coef));
    for (auto [v, p] : t.powers) {
      out << "*x" << v + 1;
      if (p != 1) out << '^' << p;
    }
  }
  return out.str();
}

void PolynomialModel::predict(std::span<const double> rows, std::size_t num_rows,
                              std::span<double> out) const {
  check_rows(rows, num_rows, out, arity_);
  for (std::size_t r = 0; r < num_rows; ++r) {
    const double* x = rows.data() + r * arity_;
    double s = 0.0;
    for (const auto& t : terms_) {
      double m = t.coef;
      for (auto [v, p] : t.powers) m *= p == 1 ? x[v] : std::pow(x[v], p);
      s += m;
    }
    out[r] = s;
  }
}

int PolynomialModel::degree() const {
  int d = 0;
  for (const auto& t : terms_) {
    int td = 0;
    for (auto [v, p] : t.powers) td += p;
    d = std::max(d, td);
  }
  return d;
}

std::optional<QuadraticForm> PolynomialModel::quadratic() const {
  if (degree() > 2) return std::nullopt;
  QuadraticForm q(arity_);
  for (const auto& t : terms_) {
    std::vector<int> vars;
    for (auto [v, p] : t.powers) {
      for (int k = 0; k < p; ++k) vars.push_back(v);
    }
    if (vars.empty()) {
      q.c += t.coef;
    } else if (vars.size() == 1) {
      q.b[vars[0]] += t.coef;
    } else {
      const int i = vars[0], j = vars[1];
      q.a[i * arity_ + j] += 0.5 * t.coef;
      q.a[j * arity_ + i] += 0.5 * t.coef;
    }
  }
  return q;
}

RectangleModel::RectangleModel(std::vector<Side> sides, int arity)
    : sides_(std::move(sides)), arity_(arity) {
  int needed = 0;
  for (const auto& s : sides_) {
    if (s.var < 0) throw_invalid("invalid rectangle variable");
    needed = std::max(needed, s.var + 1);
  }
  if (arity_ == 0) arity_ = needed;
  if (arity_ < needed) throw InputError("rectangle uses more variables than the arity");
}

RectangleModel RectangleModel::parse(const std::string& text, int arity) {
  std::vector<Side> sides;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::stringstream ps(strip(part));
    std::string a, b, c;
    if (!std::getline(ps, a, ':') || !std::getline(ps, b, ':') || !std::getline(ps, c)) {
      throw InputError("rectangle side '" + part + "' must be var:lo:hi");
    }
    Side s;
    try {
      s.var = std::stoi(a) - 1;
    } catch (const std::exception&) {
      throw InputError("rectangle side '" + part + "': bad variable");
    }
    s.lo = parse_double(b);
    s.hi = parse_double(c);
    sides.push_back(s);
  }
  if (sides.empty()) throw InputError("rectangle needs at least one side");
  return RectangleModel(std::move(sides), arity);
}

std::string RectangleModel::describe() const {
  std::ostringstream out;
  out << "rect:";
  for (std::size_t k = 0; k < sides_.size(); ++k) {
    if (k) out << ',';
    out << sides_[k].var + 1 << ':' << format_double(sides_[k].lo) << ':'
        << format_double(sides_[k].hi);
  }
  return out.str();
}

void RectangleModel::predict(std::span<const double> rows, std::size_t num_rows,
                             std::span<double> out) const {
  check_rows(rows, num_rows, out, arity_);
  for (std::size_t r = 0; r < num_rows; ++r) {
    const double* x = rows.data() + r * arity_;
    bool inside = true;
    for (const auto& s : sides_) inside = inside && x[s.var] > s.lo && x[s.var] < s.hi;
    out[r] = inside ? 1.0 : 0.0;
  }
}

SubprocessModel::SubprocessModel(std::string command, int arity, std::size_t batch_rows)
    : command_(std::move(command)), arity_(arity), batch_rows_(batch_rows) {
  if (arity_ < 1) throw_invalid("subprocess model needs a positive arity");
  if (batch_rows_ < 1) throw_invalid("batch size must be positive");
  start();
}

SubprocessModel::~SubprocessModel() { stop(); }

void SubprocessModel::start() {
  ::signal(SIGPIPE, SIG_IGN);
  int in_pipe[2], out_pipe[2];
  if (::pipe(in_pipe) != 0) throw ProtocolError("pipe() failed");
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw ProtocolError("pipe() failed");
  }
  const pid_t pid = ::fork();
  if (pid < 0) throw ProtocolError("fork() failed");
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  ::fcntl(to_child_, F_SETFL, ::fcntl(to_child_, F_GETFL) | O_NONBLOCK);
  ::fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  ::fcntl(from_child_, F_SETFD, FD_CLOEXEC);
}

void SubprocessModel::stop() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    int status = 0;
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

void SubprocessModel::predict(std::span<const double> rows, std::size_t num_rows,
                              std::span<double> out) const {
  check_rows(rows, num_rows, out, arity_);
  std::lock_guard<std::mutex> lock(mu_);
  for (std::size_t start = 0; start < num_rows; start += batch_rows_) {
    const std::size_t count = std::min(batch_rows_, num_rows - start);
    run_batch(rows.subspan(start * arity_, count * arity_), count, out.subspan(start, count),
              batches_++);
  }
}

void SubprocessModel::run_batch(std::span<const double> rows, std::size_t num_rows,
                                std::span<double> out, std::size_t batch_index) const {
  if (to_child_ < 0) throw ProtocolError("scoring process is not running");
  std::string request;
  request.reserve(num_rows * arity_ * 24);
  char buf[40];
  for (std::size_t r = 0; r < num_rows; ++r) {
    for (int c = 0; c < arity_; ++c) {
      if (c) request.push_back(',');
      std::snprintf(buf, sizeof buf, "%.17g", rows[r * arity_ + c]);
      request += buf;
    }
    request.push_back('\n');
  }
  request.push_back('\n');

  const std::string where = "batch " + std::to_string(batch_index);
  std::size_t written = 0, received = 0;
  char rbuf[65536];
  // Late replies to the previous batch.
  for (pollfd fd{from_child_, POLLIN, 0}; ::poll(&fd, 1, 0) > 0 && (fd.revents & POLLIN);) {
    const ssize_t n = ::read(from_child_, rbuf, sizeof rbuf);
    if (n <= 0) break;
    pending_.append(rbuf, static_cast<std::size_t>(n));
  }
  if (pending_.find_first_not_of(" \t\r\n") != std::string::npos) {
    throw ProtocolError(where + ": more replies than rows in the previous batch: '" +
                        pending_.substr(0, pending_.find('\n')) + "'");
  }
  pending_.clear();
  while (received < num_rows) {
    pollfd fds[2];
    int nfds = 0;
    fds[nfds++] = {from_child_, POLLIN, 0};
    if (written < request.size()) fds[nfds++] = {to_child_, POLLOUT, 0};
    if (::poll(fds, nfds, 60000) <= 0) {
      throw ProtocolError(where + ": scoring process timed out or poll failed");
    }
    if (nfds == 2 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      const ssize_t w = ::write(to_child_, request.data() + written, request.size() - written);
      if (w < 0 && errno != EAGAIN && errno != EWOULDBLOCK) {
        throw ProtocolError(where + ": scoring process closed its input");
      }
      if (w > 0) written += static_cast<std::size_t>(w);
    }
    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      const ssize_t n = ::read(from_child_, rbuf, sizeof rbuf);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        throw ProtocolError(where + ": scoring process exited after " +
                            std::to_string(received) + " of " + std::to_string(num_rows) +
                            " rows");
      }
      pending_.append(rbuf, static_cast<std::size_t>(n));
      std::size_t nl;
      while (received < num_rows && (nl = pending_.find('\n')) != std::string::npos) {
        std::string line = pending_.substr(0, nl);
        pending_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        double v = 0.0;
        try {
          v = parse_double(line);
        } catch (const InputError&) {
          throw ProtocolError(where + ", row " + std::to_string(received) +
                              ": expected one number, got '" + line + "'");
        }
        if (!std::isfinite(v)) {
          throw ProtocolError(where + ", row " + std::to_string(received) +
                              ": non-finite score '" + line + "'");
        }
        out[received++] = v;
      }
    }
  }
  // Finish sending the terminating blank line if the reply raced ahead.
  while (written < request.size()) {
    pollfd fd{to_child_, POLLOUT, 0};
    if (::poll(&fd, 1, 60000) <= 0) throw ProtocolError(where + ": write timed out");
    const ssize_t w = ::write(to_child_, request.data() + written, request.size() - written);
    if (w < 0 && errno != EAGAIN && errno != EWOULDBLOCK) {
      throw ProtocolError(where + ": scoring process closed its input");
    }
    if (w > 0) written += static_cast<std::size_t>(w);
  }
  if (!pending_.empty() && pending_.find_first_not_of(" \t\r\n") != std::string::npos) {
    throw ProtocolError(where + ": more replies than rows: '" +
                        pending_.substr(0, pending_.find('\n')) + "'");
  }
}

std::unique_ptr<Model> make_model(const std::string& spec, int arity,
                                  std::size_t batch_rows) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw InputError("model spec '" + spec + "' needs a kind prefix such as poly: or cmd:");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);
  if (kind == "poly" || kind == "bilinear" || kind == "linear" || kind == "analytic") {
    return std::make_unique<PolynomialModel>(PolynomialModel::parse(body, arity));
  }
  if (kind == "rect") return std::make_unique<RectangleModel>(RectangleModel::parse(body, arity));
  if (kind == "cmd" || kind == "subprocess") {
    return std::make_unique<SubprocessModel>(strip(body), arity, batch_rows);
  }
  throw InputError("unknown model kind '" + kind + "'");
}

namespace {

class DifferenceModel : public Model {
 public:
  DifferenceModel(std::shared_ptr<const Model> a, std::shared_ptr<const Model> b)
      : a_(std::move(a)), b_(std::move(b)) {
    if (a_->arity() != b_->arity()) throw_invalid("models differ in arity");
  }
  int arity() const override { return a_->arity(); }
  std::string describe() const override {
    return "(" + a_->describe() + ") - (" + b_->describe() + ")";
  }
  void predict(std::span<const double> rows, std::size_t num_rows,
               std::span<double> out) const override {
    std::vector<double> tmp(num_rows);
    a_->predict(rows, num_rows, out);
    b_->predict(rows, num_rows, tmp);
    for (std::size_t r = 0; r < num_rows; ++r) out[r] -= tmp[r];
  }
  std::optional<QuadraticForm> quadratic() const override {
    auto qa = a_->quadratic();
    auto qb = b_->quadratic();
    if (!qa || !qb) return std::nullopt;
    *qa += qb->scale(-1.0);
    return qa;
  }

 private:
  std::shared_ptr<const Model> a_, b_;
};

}  // namespace

std::unique_ptr<Model> difference_model(std::shared_ptr<const Model> a,
                                        std::shared_ptr<const Model> b) {
  return std::make_unique<DifferenceModel>(std::move(a), std::move(b));
}

}  // namespace coalex
