#pragma once

#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace qmzv::detail {

// Insert-only cache shared between threads. Racing fills of the same key are
// harmless: values are pure functions of the key, the first insert wins.
template <typename Key, typename Value, typename Hash = std::hash<Key>>
class ConcurrentMemo {
public:
    using Ptr = std::shared_ptr<const Value>;

    Ptr find(const Key& key) const
    {
        std::shared_lock lock(mutex_);
        auto it = map_.find(key);
        return it == map_.end() ? nullptr : it->second;
    }

    Ptr insert(const Key& key, Value value)
    {
        auto ptr = std::make_shared<const Value>(std::move(value));
        std::unique_lock lock(mutex_);
        auto [it, inserted] = map_.try_emplace(key, std::move(ptr));
        return it->second;
    }

    template <typename F>
    Ptr get_or_compute(const Key& key, F&& compute)
    {
        if (auto hit = find(key))
            return hit;
        return insert(key, compute());
    }

    void clear()
    {
        std::unique_lock lock(mutex_);
        map_.clear();
    }

private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<Key, Ptr, Hash> map_;
};

}  // namespace qmzv::detail
