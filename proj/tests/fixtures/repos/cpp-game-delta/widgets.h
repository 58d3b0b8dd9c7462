#pragma once

#include "cocos2d.h"

inline cocos2d::Label* makeBadge(const std::string& text) {
    cocos2d::Label* badge = cocos2d::Label::createWithTTF(text, "fonts/marker.ttf", 24.0f);
    badge->setScale(0.5f);
    return badge;
}
