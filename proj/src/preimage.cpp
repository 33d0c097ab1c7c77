#include "tentsurgery/preimage.hpp"

#include <algorithm>
#include <sstream>

namespace tentsurgery {

std::vector<FieldElem> preimages_one_step(const FieldElem& z) {
    if (z.sign() < 0 || (z - Rat(1)).sign() > 0) throw DomainError("point outside [0, 1]");
    auto field = z.field();
    FieldElem c = field->half();
    FieldElem left = z * field->beta_inverse();
    FieldElem right = field->one() - left;
    std::vector<FieldElem> out;
    if (left.compare(c) != Ordering::GT) out.push_back(left);
    if (right.compare(c) == Ordering::GT) out.push_back(right);
    return out;
}

PreimageTree enumerate_tree(const NumberField::Ptr& field, const CriticalOrbitData& orbit,
                            int depth, int cap) {
    if (depth < 0) throw std::invalid_argument("depth must be >= 0");
    if (depth > cap) throw CapExceeded("preimage tree depth exceeds cap");
    std::unordered_map<FieldElem, bool, FieldElemHash, FieldElemEq> on_orbit;
    for (const auto& p : orbit.points) on_orbit.emplace(p, true);
    FieldElem c = field->half();
    auto symbol_of = [&](const FieldElem& x) {
        switch (x.compare(c)) {
            case Ordering::LT: return Symbol::Zero;
            case Ordering::EQ: return Symbol::Star;
            default: return Symbol::One;
        }
    };

    PreimageTree tree;
    const FieldElem& root = orbit.periodic_point();
    PreimageNode r;
    r.point = root;
    r.level = 0;
    r.word.symbols = {symbol_of(root)};
    r.on_orbit = true;
    tree.levels.push_back({r});

    for (int n = 1; n <= depth; ++n) {
        std::vector<PreimageNode> next;
        const auto& prev = tree.levels.back();
        for (std::size_t pi = 0; pi < prev.size(); ++pi) {
            for (auto& x : preimages_one_step(prev[pi].point)) {
                if (x.identical(root)) continue;  // first-hit pruning
                PreimageNode node;
                node.level = n;
                node.word.symbols.reserve(static_cast<std::size_t>(n) + 1);
                node.word.symbols.push_back(symbol_of(x));
                node.word.symbols.insert(node.word.symbols.end(), prev[pi].word.symbols.begin(),
                                         prev[pi].word.symbols.end());
                node.on_orbit = on_orbit.count(x) > 0;
                node.parent = static_cast<int>(pi);
                node.point = std::move(x);
                next.push_back(std::move(node));
            }
        }
        std::sort(next.begin(), next.end(), [](const PreimageNode& a, const PreimageNode& b) {
            return a.point.compare(b.point) == Ordering::LT;
        });
        tree.levels.push_back(std::move(next));
    }
    return tree;
}

CountEngine::CountEngine(NumberField::Ptr field, const CriticalOrbitData& orbit)
    : CountEngine(std::move(field), orbit, orbit.periodic_point(), true) {}

CountEngine::CountEngine(NumberField::Ptr field, const CriticalOrbitData& orbit, FieldElem target,
                         bool target_periodic)
    : field_(std::move(field)),
      orbit_(orbit),
      target_(std::move(target)),
      target_periodic_(target_periodic),
      c_(field_->half()),
      one_(field_->one()) {
    register_threshold(orbit_.c());
    register_threshold(field_->zero());
    register_threshold(one_);
    c1_id_ = register_threshold(tent_apply(c_));
}

int CountEngine::register_threshold(const FieldElem& y, int max_chain) {
    auto it = index_.find(y);
    if (it != index_.end()) return it->second;

    // Walk forward until the chain closes into the registry or itself.
    std::vector<FieldElem> chain{y};
    std::unordered_map<FieldElem, int, FieldElemHash, FieldElemEq> local;
    local.emplace(y, 0);
    int closure_registry = -1;  // id in th_
    int closure_local = -1;     // index in chain
    for (int step = 0;; ++step) {
        if (step > max_chain) throw CapExceeded("threshold orbit did not close");
        FieldElem nxt = tent_apply(chain.back());
        auto reg = index_.find(nxt);
        if (reg != index_.end()) {
            closure_registry = reg->second;
            break;
        }
        auto loc = local.find(nxt);
        if (loc != local.end()) {
            closure_local = loc->second;
            break;
        }
        local.emplace(nxt, static_cast<int>(chain.size()));
        chain.push_back(std::move(nxt));
    }

    int base = static_cast<int>(th_.size());
    th_.resize(th_.size() + chain.size());
    for (std::size_t j = 0; j < chain.size(); ++j) {
        Threshold& t = th_[static_cast<std::size_t>(base) + j];
        t.point = chain[j];
        t.le_c = chain[j].compare(c_) != Ordering::GT;
        if (j + 1 < chain.size())
            t.next = base + static_cast<int>(j) + 1;
        else
            t.next = closure_registry >= 0 ? closure_registry : base + closure_local;
        index_.emplace(chain[j], base + static_cast<int>(j));
    }

    // Hit patterns; two backward sweeps resolve linear parts and any
    // in-chain cycle.
    for (int pass = 0; pass < 2; ++pass) {
        for (int j = static_cast<int>(chain.size()) - 1; j >= 0; --j) {
            Threshold& t = th_[static_cast<std::size_t>(base + j)];
            if (t.hit_first != -2) continue;
            if (t.point.identical(target_)) {
                t.hit_first = 0;
                t.hit_period = target_periodic_ ? orbit_.period : 0;
                continue;
            }
            const Threshold& nx = th_[static_cast<std::size_t>(t.next)];
            if (nx.hit_first >= 0) {
                t.hit_first = nx.hit_first + 1;
                t.hit_period = nx.hit_period;
            } else if (nx.hit_first == -1 || pass == 1) {
                t.hit_first = -1;
            }
        }
    }

    // Backfill S up to the current frontier, level by level (next-links may
    // point inside the new chain, which a per-level sweep handles).
    for (std::size_t j = 0; j < chain.size(); ++j) {
        Threshold& t = th_[static_cast<std::size_t>(base) + j];
        t.S.reserve(static_cast<std::size_t>(std::max(levels_done_, 0)) + 1);
        if (levels_done_ >= 0)
            t.S.push_back(Int(target_.compare(t.point) != Ordering::GT ? 1 : 0));
    }
    for (int n = 1; n <= levels_done_; ++n) {
        for (std::size_t j = 0; j < chain.size(); ++j) {
            Threshold& t = th_[static_cast<std::size_t>(base) + j];
            const Threshold& nx = th_[static_cast<std::size_t>(t.next)];
            const Threshold& c1 = th_[static_cast<std::size_t>(c1_id_)];
            if (t.le_c) {
                t.S.push_back(nx.S[static_cast<std::size_t>(n) - 1]);
            } else {
                Int v = 2 * c1.S[static_cast<std::size_t>(n) - 1] - nx.S[static_cast<std::size_t>(n) - 1];
                if (hits_at(t.next, n - 1)) v += 1;
                if (hits_at(c1_id_, n - 1)) v -= 1;
                t.S.push_back(v);
            }
        }
    }
    return base;
}

bool CountEngine::hits_at(int id, int n) const {
    const Threshold& t = th_[static_cast<std::size_t>(id)];
    if (t.hit_first < 0 || n < t.hit_first) return false;
    if (n == t.hit_first) return true;
    return t.hit_period > 0 && (n - t.hit_first) % t.hit_period == 0;
}

std::pair<int, int> CountEngine::hit_pattern(int id) const {
    const Threshold& t = th_[static_cast<std::size_t>(id)];
    return {t.hit_first, t.hit_period};
}

void CountEngine::ensure_levels(int nmax) {
    if (nmax <= levels_done_) return;
    for (int n = std::max(levels_done_ + 1, 0); n <= nmax; ++n) {
        if (n == 0) {
            for (auto& t : th_) t.S.push_back(Int(target_.compare(t.point) != Ordering::GT ? 1 : 0));
        } else {
            const std::size_t count = th_.size();
            std::vector<Int> fresh(count);
            for (std::size_t i = 0; i < count; ++i) {
                Threshold& t = th_[i];
                const Threshold& nx = th_[static_cast<std::size_t>(t.next)];
                if (t.le_c) {
                    fresh[i] = nx.S[static_cast<std::size_t>(n) - 1];
                } else {
                    const Threshold& c1 = th_[static_cast<std::size_t>(c1_id_)];
                    Int v = 2 * c1.S[static_cast<std::size_t>(n) - 1] -
                            nx.S[static_cast<std::size_t>(n) - 1];
                    if (hits_at(t.next, n - 1)) v += 1;
                    if (hits_at(c1_id_, n - 1)) v -= 1;
                    fresh[i] = std::move(v);
                }
            }
            for (std::size_t i = 0; i < count; ++i) th_[i].S.push_back(std::move(fresh[i]));
        }
        levels_done_ = n;
    }
}

Int CountEngine::S(int id, int n) {
    ensure_levels(n);
    return th_[static_cast<std::size_t>(id)].S[static_cast<std::size_t>(n)];
}

Int CountEngine::strict(int id, int n) {
    Int v = S(id, n);
    if (hits_at(id, n)) v -= 1;
    return v;
}

CountEngine::Column CountEngine::column(const FieldElem& y, int nmax, bool inclusive) {
    if (y.sign() < 0 || (y - Rat(1)).sign() > 0) throw DomainError("threshold outside [0, 1]");
    Column col;
    col.T.resize(static_cast<std::size_t>(nmax) + 1);

    bool closed = true;
    int id = -1;
    try {
        id = register_threshold(y, nmax + orbit_.size() + 8);
    } catch (const CapExceeded&) {
        closed = false;
    }

    if (closed) {
        ensure_levels(nmax);
        for (int n = 0; n <= nmax; ++n)
            col.T[static_cast<std::size_t>(n)] = inclusive ? S(id, n) : strict(id, n);
    } else {
        // Open chain: triangle of S values over y, f(y), ..., f^nmax(y).
        std::vector<FieldElem> chain{y};
        std::vector<bool> le(static_cast<std::size_t>(nmax) + 1);
        std::vector<int> hit(static_cast<std::size_t>(nmax) + 2, -1);
        for (int j = 0; j <= nmax; ++j) {
            if (j > 0) chain.push_back(tent_apply(chain.back()));
            le[static_cast<std::size_t>(j)] = chain.back().compare(c_) != Ordering::GT;
        }
        // hit[j] = first i >= 0 with f^(j+i)(y) = target, from the walk alone;
        // beyond the walk the chain is unresolved, but indicators are only
        // consulted for j + n <= nmax, which the walk covers.
        for (int j = nmax; j >= 0; --j) {
            if (chain[static_cast<std::size_t>(j)].identical(target_))
                hit[static_cast<std::size_t>(j)] = 0;
            else if (j < nmax && hit[static_cast<std::size_t>(j) + 1] >= 0)
                hit[static_cast<std::size_t>(j)] = hit[static_cast<std::size_t>(j) + 1] + 1;
        }
        auto e = [&](int j, int n) {
            int h = hit[static_cast<std::size_t>(j)];
            if (h < 0 || n < h) return false;
            if (n == h) return true;
            return target_periodic_ && (n - h) % orbit_.period == 0;
        };
        ensure_levels(nmax);
        std::vector<Int> prev(static_cast<std::size_t>(nmax) + 1), cur;
        for (int j = 0; j <= nmax; ++j)
            prev[static_cast<std::size_t>(j)] =
                Int(target_.compare(chain[static_cast<std::size_t>(j)]) != Ordering::GT ? 1 : 0);
        col.T[0] = prev[0] - Int(!inclusive && e(0, 0) ? 1 : 0);
        for (int n = 1; n <= nmax; ++n) {
            cur.assign(static_cast<std::size_t>(nmax - n) + 1, Int(0));
            for (int j = 0; j + n <= nmax; ++j) {
                Int v;
                if (le[static_cast<std::size_t>(j)]) {
                    v = prev[static_cast<std::size_t>(j) + 1];
                } else {
                    v = 2 * S(c1_id_, n - 1) - prev[static_cast<std::size_t>(j) + 1];
                    if (e(j + 1, n - 1)) v += 1;
                    if (hits_at(c1_id_, n - 1)) v -= 1;
                }
                cur[static_cast<std::size_t>(j)] = std::move(v);
            }
            col.T[static_cast<std::size_t>(n)] = cur[0];
            if (!inclusive && e(0, n)) col.T[static_cast<std::size_t>(n)] -= 1;
            prev = cur;
        }
    }

    if (target_periodic_) {
        int m = orbit_.period;
        col.N.resize(col.T.size());
        for (int n = 0; n <= nmax; ++n) {
            Int v = col.T[static_cast<std::size_t>(n)];
            for (int s = n - m; s >= 0; s -= m) v -= col.N[static_cast<std::size_t>(s)];
            col.N[static_cast<std::size_t>(n)] = std::move(v);
        }
        col.Nx = col.N;
        for (int i = 0; i < orbit_.size(); ++i) {
            const FieldElem& w = orbit_.points[static_cast<std::size_t>(i)];
            Ordering ord = w.compare(y);
            bool counted = inclusive ? ord != Ordering::GT : ord == Ordering::LT;
            if (!counted) continue;
            int fh = orbit_.first_hit_from(i);
            if (fh <= nmax) col.Nx[static_cast<std::size_t>(fh)] -= 1;
        }
    }
    return col;
}

std::pair<Int, Int> CountEngine::count_below(const FieldElem& y, int n) {
    auto col = column(y, n, false);
    return {col.T[static_cast<std::size_t>(n)], col.N[static_cast<std::size_t>(n)]};
}

Int CountEngine::level_count(int n) { return level_counts(n).back(); }

std::vector<Int> CountEngine::level_counts(int nmax) {
    if (!target_periodic_) throw std::logic_error("first-hit counts need a periodic target");
    int one_id = register_threshold(one_);
    ensure_levels(nmax);
    int m = orbit_.period;
    std::vector<Int> N(static_cast<std::size_t>(nmax) + 1);
    for (int n = 0; n <= nmax; ++n) {
        Int v = S(one_id, n);  // inclusive right endpoint
        for (int s = n - m; s >= 0; s -= m) v -= N[static_cast<std::size_t>(s)];
        N[static_cast<std::size_t>(n)] = std::move(v);
    }
    return N;
}

Int CountEngine::total_count(int n) {
    int one_id = register_threshold(one_);
    return S(one_id, n);
}

LengthSchedule::LengthSchedule(NumberField::Ptr field)
    : field_(std::move(field)),
      inv_beta_(field_->beta_inverse()),
      inv_beta_iv_(inv_beta_.to_interval(80)) {}

FieldElem LengthSchedule::a_exact(int n) const {
    if (n < 1) throw std::invalid_argument("schedule defined for n >= 1");
    return inv_beta_.pow(n) * make_rat(2, static_cast<long>(n) * (n + 1));
}

DInterval LengthSchedule::a_enclosure(int n) const {
    if (n < 1) throw std::invalid_argument("schedule defined for n >= 1");
    return inv_beta_iv_.pow_nonneg(static_cast<unsigned>(n)) *
           di_from_rat(make_rat(2, static_cast<long>(n) * (n + 1)));
}

FieldElem LengthSchedule::lambda_exact(int n) const {
    if (n < 1) throw std::invalid_argument("lambda defined for n >= 1");
    if (n == 1) return inv_beta_;
    return inv_beta_ * make_rat(n - 1, n + 1);
}

std::vector<CountTableRow> count_table(const NumberField::Ptr& field,
                                       const CriticalOrbitData& orbit, int nmax, int tree_cap) {
    CountEngine engine(field, orbit);
    LengthSchedule sched(field);
    std::optional<PreimageTree> tree;
    if (tree_cap >= 0) tree = enumerate_tree(field, orbit, std::min(nmax, tree_cap));
    auto F = engine.level_counts(nmax);
    std::vector<CountTableRow> rows;
    DInterval cum(0.0);
    for (int n = 0; n <= nmax; ++n) {
        CountTableRow row;
        row.n = n;
        row.F_recursion = F[static_cast<std::size_t>(n)];
        if (tree && n <= tree->depth())
            row.F_tree = Int(static_cast<long>(tree->levels[static_cast<std::size_t>(n)].size()));
        if (n >= 1) {
            row.a_n = sched.a_enclosure(n);
            cum += row.a_n * DInterval::from_rat(Rat(F[static_cast<std::size_t>(n)]));
        } else {
            row.a_n = DInterval(0.0);
        }
        row.cumulative = cum;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string count_table_csv(const std::vector<CountTableRow>& rows) {
    std::ostringstream os;
    os << "n,F_tree,F_recursion,a_n_lo,a_n_hi,cum_Fa_lo,cum_Fa_hi\n";
    os.precision(17);
    for (const auto& r : rows) {
        os << r.n << ",";
        if (r.F_tree) os << r.F_tree->get_str();
        os << "," << r.F_recursion.get_str() << "," << r.a_n.lo() << "," << r.a_n.hi() << ","
           << r.cumulative.lo() << "," << r.cumulative.hi() << "\n";
    }
    return os.str();
}

}  // namespace tentsurgery
