#include "ufk/environment.hpp"

namespace ufk {

GlobalEnv::GlobalEnv()
    : index_(std::make_shared<const Index>()), order_(std::make_shared<const std::vector<DeclPtr>>()) {}

const Declaration* GlobalEnv::find(std::string_view name) const {
    auto it = index_->find(name);
    return it == index_->end() ? nullptr : it->second.get();
}

DeclPtr GlobalEnv::find_ptr(std::string_view name) const {
    auto it = index_->find(name);
    return it == index_->end() ? nullptr : it->second;
}

GlobalEnv GlobalEnv::extend(DeclPtr decl) const {
    auto index = std::make_shared<Index>(*index_);
    auto order = std::make_shared<std::vector<DeclPtr>>(*order_);
    index->emplace(decl->name, decl);
    order->push_back(std::move(decl));
    GlobalEnv out;
    out.index_ = std::move(index);
    out.order_ = std::move(order);
    return out;
}

}  // namespace ufk
