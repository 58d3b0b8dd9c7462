#include "cocos2d.h"
#include "scene.h"

USING_NS_CC;

Scene* HelloWorld::createScene() {
    auto scene = Scene::create();
    auto layer = HelloWorld::create();
    scene->addChild(layer);
    return scene;
}

bool HelloWorld::init() {
    if (!Scene::init()) {
        return false;
    }
    auto sprite = Sprite::create("hero.png");
    sprite->setPosition(Vec2(240.0f, 160.0f));
    this->addChild(sprite);
    return true;
}

void HelloWorld::buildBackground() {
    cocos2d::Sprite* bg = cocos2d::Sprite::create("bg.png");
    bg->setScale(2.0f);
    auto size = Director::getInstance()->getVisibleSize();
    bg->setPosition(Vec2(size.width / 2, size.height / 2));
    this->addChild(bg);
}

void HelloWorld::update(float delta) {
    elapsed_ = elapsed_ + delta;
    if (elapsed_ > 10.0f) {
        elapsed_ = 0.0f;
    }
}

int clampFrames(int frames) {
    int bounded = frames;
    if (bounded < 0) {
        bounded = 0;
    }
    return bounded;
}
